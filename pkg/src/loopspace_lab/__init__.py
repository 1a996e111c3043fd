"""loopspace-lab: numerical laboratory for fractional-order loop spaces.

Subsystems:

* :mod:`loopspace_lab.spectral` -- Fourier loops, fractional norms, pairings
* :mod:`loopspace_lab.manifolds` -- embedded targets, projections, bridges
* :mod:`loopspace_lab.mollifier` -- the smooth monotone time-change phi(l, .)
* :mod:`loopspace_lab.homotopy` -- graft / retraction / truncation families
* :mod:`loopspace_lab.diffeology` -- plots, pseudo-distances, volumes, forms
* :mod:`loopspace_lab.symplectic` -- duality 1- and 2-forms and bound probes
* :mod:`loopspace_lab.experiments` -- config-driven verification harness
"""

__version__ = "0.1.0"

from .spectral import (AmbientAlgebra, FourierLoop, SampledLoop, SobolevOrder,
                       dft_analyze, dft_synthesize, dual_pairing,
                       fractional_multiplier, loop_derivative,
                       pointwise_product, random_rough_loop, sobolev_inner,
                       sobolev_norm)

__all__ = [
    "AmbientAlgebra", "FourierLoop", "SampledLoop", "SobolevOrder",
    "dft_analyze", "dft_synthesize", "dual_pairing", "fractional_multiplier",
    "loop_derivative", "pointwise_product", "random_rough_loop",
    "sobolev_inner", "sobolev_norm", "__version__",
]
