import copy

import pytest

from aoci.config import LinkConfig

# Baseline link instance used across test modules: datasheet optics
# (D = w0 = 0.1 mm at 594 nm, coupling argument at its optimum), 6 mm of
# skin, one fiber bend plus one grating, and a mean background count of 1.5.
BASELINE_DOC = {
    "source": {"power_mw": 40.0, "lambda_nm": 594.0},
    "skin": {"delta_mm": 6.0, "mu_a_per_mm": 0.1, "mu_s_per_mm": 0.4},
    "beam": {"theta_deg": 20.0, "beta_mm": 2.0, "sigma_s_mm": 0.1},
    "mem": {"d_in_mm": 1.0, "f_mm": 1.0, "z0_mm": 1.0},
    "coupling": {"lens_diameter_mm": 0.1, "focal_length_mm": 47.147, "omega0_mm": 0.1},
    "fiber": {
        "bend_db_per_90deg": 0.14,
        "n_quarter_turns": 1.0,
        "fbg_fraction_lost": 0.1,
        "n_fbg": 1,
    },
    "neural": {
        "f0_per_s": 10.0,
        "tau_s": 0.15,
        "y_th_photons": 2.835e14,
        "d_th_photons": 3.2e17,
    },
    "skin_spot_radius_mm": 1.066,
}


@pytest.fixture()
def baseline_doc() -> dict:
    return copy.deepcopy(BASELINE_DOC)


@pytest.fixture()
def baseline_cfg(baseline_doc) -> LinkConfig:
    return LinkConfig.from_dict(baseline_doc)
