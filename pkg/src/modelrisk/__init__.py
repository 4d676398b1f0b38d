"""Model risk of Value-at-Risk and Expected Shortfall.

Sharp worst/best-case risk over classes of alternative laws, and the absolute
(AM), relative (RM) and local (LM) measures of model risk built on them.
"""

from .bounds import BoundKind, bound, multiplier_ratio, ratio_curve
from .dist import (
    AffineOf,
    Distribution,
    Mixture,
    MomentClass,
    PointMass,
    StandardNormal,
    StudentT,
    TwoPoint,
    lower_quantile,
    mixture_cdf,
    standardize,
)
from .envelope import (
    EnvelopePair,
    chebyshev_markov_envelope,
    extremal_quantiles,
    kolmogorov_ball_envelope,
    levy_ball_envelope,
    mixture_class_envelope,
    stop_loss_extremals,
)
from .measures import (
    FamilyKind,
    KolmogorovBall,
    LevyBall,
    MixtureClass,
    ModelRiskReport,
    Moments,
    acceptability,
    assess,
    local_measure,
    moment_class_es_report,
    moment_class_var_report,
    report,
)
from .riskmeasure import Measure, RiskMeasureSpec, expected_shortfall, value_at_risk

__version__ = "0.1.0"
