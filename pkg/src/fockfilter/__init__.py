"""Fock-state filtering of light with two beam splitters and a coherent ancilla."""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .filter import (  # noqa: E402
    FilterConfig,
    HeraldedResult,
    alpha_for_hole,
    alpha_for_parity,
    filtered_state,
    hole_operator,
    lambda_param,
)
from .fock import (  # noqa: E402
    FockVector,
    cat_state,
    coherent_state,
    displacement_operator,
    fock_state,
    inner_product,
    norm,
    normalize,
    squeeze_operator,
    squeezed_coherent_state,
    tail_mass,
)
from .metrics import (  # noqa: E402
    QuadratureReport,
    fidelity,
    mandel_q,
    mean_photon_number,
    photon_distribution,
    quadratures,
)
