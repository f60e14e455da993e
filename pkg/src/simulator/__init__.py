from src.simulator.adversary import forge_beacons, inject_adversary
from src.simulator.config import AdversaryPolicy, ScenarioConfig, load_scenario, parse_scenario
from src.simulator.engine import Simulation, run_scenario
from src.simulator.messages import BodyKind, NetMessage, Origin
from src.simulator.metrics import EventLog, RunMetrics

__all__ = [
    "AdversaryPolicy",
    "BodyKind",
    "EventLog",
    "NetMessage",
    "Origin",
    "RunMetrics",
    "ScenarioConfig",
    "Simulation",
    "forge_beacons",
    "inject_adversary",
    "load_scenario",
    "parse_scenario",
    "run_scenario",
]
