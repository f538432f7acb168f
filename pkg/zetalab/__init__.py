"""zetalab"""

# pdf backend: plots are only ever written to files, never shown
import matplotlib
matplotlib.use('pdf')

from ._version import __version__
from .complex_dimensions import (
    ComplexDimension,
    Window,
    complex_dimensions_in,
    explicit_counting,
    geometric_zeta,
    tube_formula_via_dimensions,
)
from .exceptions import ZetaLabError, ZetaLabWarning
from .fractal_strings import (
    FractalString,
    GeneralizedString,
    cantor_string,
    direct_tube_volume,
    geometric_counting,
    lapidus_maier_string,
    lattice_string,
    power_law_string,
)
from .grid_functions import GridFunction, infinitesimal_shift, shift_group, weighted_inner, weighted_norm
from .riemann_explicit import duality_report, explicit_formula_reconstruction, prime_power_count
from .spectral_operator import (
    apply_euler_factor,
    apply_functional_calculus,
    apply_mobius_inverse,
    apply_spectral_operator_direct,
    compose_euler_product,
)
from .spectral_side import spectral_counting, spectral_zeta
from .truncation import (
    TruncationSpec,
    quasi_invertibility_scan,
    rh_diagnostic,
    truncated_invertibility,
    truncated_spectrum_curve,
)
from .zeros import ZetaZero, find_critical_zeros
from .zeta_engine import DEFAULT_ACCURACY, EvalAccuracy, xi, zeta, zeta_derivative
