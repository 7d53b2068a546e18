"""Two-layer interfacial wave model: Python interface to the C++ core."""

try:
    from ._kakinuma import (  # installed layout: extension inside the package
        alpha_constant,
        hamiltonian,
        phase_speed_full,
        phase_speed_model,
        prepare,
        simulate,
        spectral_derivative,
    )
except ImportError:  # build-tree layout: extension on sys.path
    from _kakinuma import (
        alpha_constant,
        hamiltonian,
        phase_speed_full,
        phase_speed_model,
        prepare,
        simulate,
        spectral_derivative,
    )

__all__ = [
    "alpha_constant",
    "hamiltonian",
    "phase_speed_full",
    "phase_speed_model",
    "prepare",
    "simulate",
    "spectral_derivative",
]
