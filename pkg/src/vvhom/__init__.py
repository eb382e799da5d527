"""Two-photon interference between vector-vortex modes through a tunable q-plate."""

from vvhom.mode_space import (
    ModeBasisId,
    PolarizationSample,
    StokesVector,
    VVState,
    basis_change,
    hybrid_stokes,
    ket,
    sample_transverse_field,
)
from vvhom.elements import (
    QPlateParams,
    SingleParticleUnitary,
    WaveplateKind,
    apply_single,
    director_angle,
    equal_up_to_phase,
    orbit,
    qplate_unitary,
    qplate_unitary_in_basis,
    waveplate,
)
from vvhom.interference import (
    NoonReport,
    PhotonPair,
    TwoPhotonOutput,
    brute_force_probabilities,
    coincidence_probability,
    evolve_pair,
    noon_decompose,
    overlap_from_delay,
)

__version__ = "0.1.0"

__all__ = [
    "ModeBasisId",
    "NoonReport",
    "PhotonPair",
    "PolarizationSample",
    "QPlateParams",
    "SingleParticleUnitary",
    "StokesVector",
    "TwoPhotonOutput",
    "VVState",
    "WaveplateKind",
    "apply_single",
    "basis_change",
    "brute_force_probabilities",
    "coincidence_probability",
    "director_angle",
    "equal_up_to_phase",
    "evolve_pair",
    "hybrid_stokes",
    "ket",
    "noon_decompose",
    "orbit",
    "overlap_from_delay",
    "qplate_unitary",
    "qplate_unitary_in_basis",
    "sample_transverse_field",
    "waveplate",
]
