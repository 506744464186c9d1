"""Construction and verification of neural networks of width at most the
input dimension: exact-fit weight synthesis, width-1 cosine interpolation,
and empirical maximum-principle checking."""

from narrowcap._core import (  # noqa: F401
    CollapseResult,
    ConeSearchError,
    ConstructionError,
    CosineFitResult,
    EpochStats,
    HyperplaneCertificate,
    LabeledDataset,
    MaxPrincipleReport,
    Network,
    NoSectorError,
    NoSeparationError,
    PointCloud,
    SearchBudgetError,
    SectorCertificate,
    SectorCheckReport,
    Snapshot,
    TrainHistory,
    check_sector_containment,
    collapse_to_point,
    cosine_fit,
    find_separating_hyperplane,
    find_sector_certificate,
    finite_exact_fit,
    generate_ball_dataset,
    gradient_check,
    householder_to_minus_e1,
    layer_snapshots,
    lipschitz_bound,
    max_principle_check,
    multi_class_exact_fit,
    projection_injectivity_check,
    render_svg,
    train,
    two_class_exact_fit,
    uuac,
)

__version__ = "0.1.0"
