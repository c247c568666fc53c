"""Numerical laboratory for non-asymptotic random matrix experiments.

Modules:
    ensembles     matrix and scalar samplers plus Haar rotations
    spectra       singular values, condition numbers, kernel vectors
    nets          epsilon nets on spheres, covering audits, norm bounds
    concentration exact and sampled Levy concentration of weighted sums
    structure     essential least common denominators, compressibility
    geometry      sections of the octahedron, Khinchin type constants
    perturbation  smallest singular value of D plus a random rotation
    harness       experiment configs, drivers, CSV reports
    figures       matplotlib rendering for report runs
"""

__version__ = "0.1.0"

from .errors import (CalibrationError, DegenerateInputError, DimensionError,
                     ResourceError, RmtLabError, ValidationError)
from .seeding import SeedPath
from .ensembles import (EnsembleSpec, KINDS, estimate_psi2, sample_haar_orthogonal,
                        sample_haar_unitary, sample_matrix, sample_scalars)
from .spectra import (condition_number, distance_to_span, operator_norm,
                      random_normal_vector, singular_values, smallest_singular_value)
from .nets import (LatticeNet, SphereNet, build_lattice_net, build_sphere_net,
                   certify_operator_norm, covering_audit, volumetric_cap)
from .concentration import (ESSEEN_CONSTANT, ConcentrationResult, enumerate_signed_sums,
                            esseen_bound, levy_exact_rademacher, levy_monte_carlo,
                            paley_zygmund, sbp_bound, tensorization_audit)
from .structure import (CompressibilityReport, LcdQuery, LcdResult, classify,
                        essential_lcd, exact_lcd, incompressible_lcd_floor,
                        kernel_lcd_experiment, scan_certificate, spread_constants)
from .geometry import (KhinchinEstimate, SectionReport, khinchin_constants,
                       min_l1_on_sphere, octahedron_section, projected_extremum,
                       sandwich_audit, section_scan)
from .perturbation import (TailCurve, dist_to_orthogonal, perturbation_tail,
                           tail_envelope_check)
from .harness import (ExperimentConfig, build_config, edelman_limit, parse_config_text,
                      run, sign_census, sign_census_monte_carlo, tail_rectangular,
                      tail_square, wilson_interval)

__all__ = [name for name in dir() if not name.startswith("_")]
