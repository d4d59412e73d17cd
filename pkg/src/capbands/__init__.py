"""Exact lattice-point counting in caps and bands on sphere shells, with
sinc-kernel restriction norms and the 3D band-sector apparatus."""

from .band3d import (
    Band3D,
    BandProfile3D,
    BandSector,
    band_radius_and_width,
    census_A13,
    census_A23,
    coplanar,
    hull_volume,
    north_pole_distance,
    sector_hull_volume,
    tetra_volume,
)
from .quadratic_counting import (
    ConicForm,
    NormFormInstance,
    divisor_count,
    embedded_circle_count,
    represent_norm_form,
    squarefree_decompose,
)
from .rational_geometry import (
    QuadSurd,
    circumcenter,
    height,
    height_properties_check,
    plane_through,
)
from .regions import (
    BandFamily,
    BandSearchConfig,
    Cap,
    DyadicBand,
    UnitBand,
    band_count,
    cap_count,
    dyadic_decompose,
    is_transverse,
    max_band_intersection,
    max_cap_count,
    wedge_norm_sq,
)
from .restriction import (
    Eigenfunction,
    GeodesicSubmanifold,
    build_extremal_band_intersection,
    build_extremal_cap_2d,
    build_extremal_subsphere_cap,
    hemisphere_split,
    hilbert_truncated_norm,
    quadrature_restriction_norm,
    restriction_norm_sq,
)
from .shell import Shell, enumerate_shell, representation_count

__version__ = "0.1.0"
