"""Numerical laboratory for the spectral statistics of hermitian Wigner matrices."""

from .deformed_kernel import (ContourParams, KernelQuery, KernelValue,
                              correlation_kernel, deformed_semicircle_density,
                              kernel_diagonal, kernel_modulus, sine_limit_report)
from .deloc import (DelocReport, TailCurve, deloc_report, deloc_statistic,
                    deloc_tail, lp_norm)
from .dbm import (DbmPath, compensated_density, dbm_path, heat_semigroup,
                  transition_density, transition_density_any_order, vandermonde)
from .ensemble import (EnsembleSpec, EntryLaw, derive_stream, gue_log_density,
                       matrix_from_csv, matrix_to_csv, realization, sample_gue,
                       sample_wigner)
from .errors import AccuracyError, ConfigError, DegeneracyError, NumericsError
from .grids import DensityGrid, gaussian_grid, grid_from_function, l1_distance
from .localstats import (CorrelationEstimate, Observable, observable_statistic,
                         rescale_near, sine_kernel_det, sine_kernel_two_point,
                         two_point_estimate)
from .semicircle import (DeviationProbability, EnergyWindow, MonteCarloMean,
                         average_dos, count_eigenvalues, deviation_probability,
                         dos_estimate, semicircle_cdf, semicircle_density,
                         semicircle_quantiles, smoothed_count)
from .spectral import (SpectralDecomposition, hermitian_eig, minor_overlaps,
                       principal_minor, resolvent_diag, schur_diag)
from .stieltjes import (SelfConsistency, empirical_stieltjes,
                        fixed_point_residual, interlacing_check,
                        self_consistency_terms, semicircle_stieltjes)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
