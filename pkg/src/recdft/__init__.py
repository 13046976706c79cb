"""REC-DFT robust adaptive beamforming with covariance reconstruction from DFT spatial sampling."""

from .array_model import (
    MismatchModel,
    SnapshotBatch,
    TrialTruth,
    apply_mismatch,
    electrical_angle,
    physical_angle,
    steering_vector,
    synthesize_trial,
)
from .baselines import capon_npicm, capon_rec, capon_spectrum, smi_mvdr
from .beamformer import (
    ConditioningError,
    SinrReport,
    capon_weights,
    dscm,
    epsilon_model,
    estimate_sv,
    optimal_sinr,
    output_sinr,
    predicted_sinr_loss,
    rec_dft,
)
from .covariance import diagonal_average_acs, sample_covariance
from .spectrum import (
    AngularGrid,
    build_grid,
    ipn_correlation_sequence,
    power_spectrum,
    reconstruct_npicm,
    toeplitz_from_acs,
)

__version__ = "0.1.0"
