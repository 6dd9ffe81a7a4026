"""Complex gamma, Bessel J of complex order, and an ODE oracle for J."""
from ._backend import BACKEND
from .bessel import BesselEval, bessel_j, jv, jv_info, jvp, jvpp, wronskian_expected
from .gamma import gamma, rgamma
from .oracle import bessel_oracle, integrate_ray

__all__ = [
    "BACKEND",
    "BesselEval",
    "bessel_j",
    "bessel_oracle",
    "gamma",
    "integrate_ray",
    "jv",
    "jv_info",
    "jvp",
    "jvpp",
    "rgamma",
    "wronskian_expected",
]
