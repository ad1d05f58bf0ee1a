"""Mode-III crack opening with strain-gradient surface elasticity."""
__version__ = "0.1.0"

from .errors import (AccuracyWarning, DomainError, HpcrackError, IllConditioningWarning,
                     IndefiniteFormError, ResolutionError, SingularChartError, SolverError)
from .fredholm import (BoundaryProfile, CrackParams, SolveReport, assemble_fredholm,
                       convergence_study, nondimensionalize, solve_galerkin_oracle,
                       solve_nystrom, tip_behavior_study)
from .greens import green, green_dss, green_identity_check
from .hilbert import (GridFunction, hilbert_of_derivative, hilbert_spectral_oracle,
                      kernel_hilbert_part)
from .field import (HalfPlaneField, dtn_check, harmonicity_residual, reconstruct_field,
                    strain_bound_report)
from .kinematics import (DeformationMap, SurfaceChart, SurfaceState, compute_surface_state,
                         convected_geodesic_test, geodesic_distortion_rate,
                         stretch_of_convected_curve)
from .surface_energy import (EnergyModuli, LinearizedSurfaceStrain, StressResultants,
                             ellipticity_form, energy_hp, energy_quadratic_linearized,
                             energy_so, linearized_strains, stress_resultants_hp_flat)
from ._accel import BACKEND
