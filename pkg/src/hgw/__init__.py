"""Hermitian graph wavelets, heat-kernel localization and mean diffusion time."""

from .centrality import (
    CentralityReport,
    ic_oracle,
    information_centrality,
    mdt_closed_form,
    mdt_numeric,
    mdt_numeric_all,
    select_leader,
    wavelet_energy,
)
from .graph import (
    Graph,
    IntrinsicMetric,
    intrinsic_metric,
    laplacian,
    load_graph,
    parse_edge_list,
    read_matrix_market,
    verify_intrinsic,
)
from .localization import (
    LocalizationReport,
    derived_bound,
    heat_bound,
    pair_constant,
    theorem1_bound,
    verify_localization,
    zeta,
    zeta_dt,
)
from .spectral import SpectralDecomposition, eigendecompose, heat_kernel
from .wavelet import (
    WaveletFrame,
    admissibility_constant,
    build_frame,
    default_scales,
    frame_bounds,
    kernel_g,
    transform,
    wavelet_atom,
    wavelet_operator,
)

__version__ = "0.1.0"
