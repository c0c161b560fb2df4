"""Two-population delayed neural field on the unit sphere.

Linear stability through spherical-harmonic kernel transfers, equivariant
Hopf normal-form coefficients for harmonic degrees 0..3, degree-1
amplitude equations, an icosahedral finite-difference discretization, and
an IMEX delay integrator.
"""

__version__ = "0.1.0"

from spherefield.kernels import (ModelParams, PresynapticParams, kernel_matrix,
                                 sigmoid, sigmoid_deriv)
from spherefield.harmonics import (HarmonicKernel, QuadratureRule,
                                   compute_transfer, gauss_legendre_rule,
                                   kernel_rule, legendre, sph_harm)
from spherefield.linear import (EigenSolution, ResonanceError, SpectralMatrix,
                                critical_eigensolution, eigenvector, find_roots,
                                resolvent_factor, spectral_matrix)
from spherefield.bifurcation import (BifurcationDiagram, FixedParams, HopfPoint,
                                     fold_curve, hopf_point, hopf_points_at_eta_e,
                                     trace_diagram)
from spherefield.normalform import (CenterManifoldTerm, NormalFormCoefficients,
                                    NormalFormState, branch_stability_l1,
                                    center_manifold_terms, coefficients_l0,
                                    coefficients_l1, coefficients_l2,
                                    coefficients_l3, normal_form_coefficients,
                                    normal_form_rhs, symmetry_generators)
from spherefield.amplitude import (AmplitudeState, amplitude_rhs, family_spectrum,
                                   rotating_wave_family, standing_wave_family)
from spherefield.mesh import (DiscreteLaplacian, SphereMesh, build_mesh,
                              discrete_laplacian, great_circle, laplace_eigentest)
from spherefield.delaysim import (DelayMatrices, DelaySimulation, HistoryBuffer,
                                  InitialMode, SimConfig, SimResult,
                                  SimulationUnstable, SplineBases,
                                  assemble_delay_matrices, mcnab_step, simulate,
                                  spline_eval)
