"""Classical analogues of single and double electromagnetically induced transparency."""

from .oscillators import (MechanicalSystem, ModalParams, derive_modal, lorentz_response,
                          mech_response, susceptibility_from_response, detuning_convert)
from .circuits import (CircuitParams, equivalent_caps, circuit_modal, reactances,
                       ab_coefficients, single_eit_ab, loop1_current, power_split)
from .netlist import parse_netlist, serialize_netlist
from .mna import stamp, solve, element_power, ac_sweep
from .spectrum import Spectrum
from .analysis import make_grid, detect_dips, resonance_frequency, compare_dip_positions
from .errors import (EITError, PoleError, NetlistError, SingularCircuitError,
                     SolverCheckError, IntegrationError, NotApplicable)

__version__ = "0.1.0"
