"""splitrad: exact local heights and non-archimedean disk dynamics for
polynomials with superattracting periodic points.

The library computes, with certificates: splitting radii and bad-place
verdicts, exact non-archimedean escape rates, certified archimedean escape
rates, local/global critical heights, canonical heights, descending disk
chains with annulus moduli and radius denominators, wing clusters,
preperiodic point sets over Q, and abc/equidistribution statistics on
explicit point sets over Q and Q(t).
"""

from .exact import (DomainError, INFINITY, LogValue, Rational,
                    UndeterminedError, divisors, factorize, is_prime,
                    valuation)
from .intervals import CBox, Interval
from .qpoly import QPoly, RatFunc, irreducible_factors
from .places import (FIELD_Q, FIELD_QT, Place, ProjectivePoint, local_abs_log,
                     naive_height, places_below, product_formula_check,
                     radical, support)
from .dynamics import (ParseError, Poly, PreperiodicPoint, center, conjugate,
                       critical_points, in_superattracting_family, iterate,
                       parse_ground, parse_poly, preperiodic_points,
                       print_poly, superattracting_cycles)
from .localheights import (LocalProfile, NewtonPolygon, analyze,
                           candidate_bad_primes, canonical_height,
                           critical_height_global, critical_height_local,
                           escape_exponent, escape_rate_arch,
                           escape_rate_nonarch, newton_polygon,
                           splitting_exponent, splitting_radius)
from .berkovich import (AnnulusPosition, ChainLevel, DiskChain, WingCluster,
                        WingClusters, annulus_mass, annulus_membership,
                        hsia_energy, inner_disk_chain, wing_clusters)
from .stats import (AbcQuality, AbcTriple, EquidistributionReport,
                    PairMomentResult, abc_quality, epsilon_good_fraction,
                    epsilon_good_sum, equidistribution_report, pair_moment,
                    theorem_experiment)
from .plotting import contour_polylines, equipotential_svg, escape_rate_grid

__version__ = "0.1.0"
