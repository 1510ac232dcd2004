from .models import Model as Model
from .fields import Quantity
from .bands import MaterialParams, PolarizationGeometry, get_preset
from .cavity import CavitySpec, DeviceGeometry
from .rate import RateInputs, closed_form_rate, quadrature_rate, spectral_sweep
from .events import EventTrace, simulate_events
from .entanglement import TwoPhotonState, ideal_state, accidental_degraded_state, chsh_value, mc_chsh
from .config import RunConfig, load_config
