"""Hidden domain of attraction: detection and estimation for bivariate tails."""

from .errors import (
    DegenerateSpacingError,
    EmptySelectionError,
    HdaError,
    InsufficientDataError,
    ModelMismatchError,
    NoAsymptoticIndependenceError,
    SampleFormatError,
)
from .evt import (
    EvtFit,
    fit_evt,
    order_statistics,
    pickands_gamma,
    psi,
    psi_inverse,
    scale_location,
    tail_psi,
    to_canonical,
)
from .fit import (
    Category,
    CategoryValue,
    Cone,
    Form,
    HdaFit,
    HdaModel,
    MeasureKind,
    Mode,
    NonstandardFit,
    TailMeasure,
    classify,
    detect,
    fit_hda,
    fit_nonstandard,
    fit_standard,
    nu_nonparametric,
    nu_semiparametric,
    tilde_nu_from_spectral,
)
from .oracles import ExampleId, oracle_nu0, oracle_nusqcap, oracle_spectral, simulate
from .sample import (
    AntirankSet,
    BivariateSample,
    Reference,
    Role,
    UnivariateSeries,
    antiranks,
    derive_series,
    load_sample,
)
from .spectral import (
    DensityEstimate,
    SpectralSample,
    Variant,
    boundary_mass,
    detection_spectral,
    kde,
    nonstandard_spectral,
    standard_spectral,
)
from .tailprob import QueryMode, TailEstimate, TailQuery, joint_tail, marginal2_tail

__version__ = "0.1.0"
