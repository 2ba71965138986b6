"""Deterministic two-room master/client teleoperation simulator.

Two mobile robots run in separate simulated rooms. The master side issues
motion (autonomy or an operator), the client side mirrors it through a
priority-multiplexed velocity coupling over a modelled network link, and the
client streams a reactive force-feedback twist back when obstacles come close.
A trial harness sweeps computation-placement cases against obstacle scenarios
and records task, network, and compute metrics.
"""

__version__ = "0.1.0"

from .geometry import Pose2D, Twist, Circle, Rect, wrap_angle
from .kinematics import CouplingGains, integrate_unicycle, integrate_omni, scale_twist
from .force import ForceParams, ForceVector, compute_force, reactive_twist
from .mux import VelocityMux
from .world import WorldSpec, WorldState, LaserScan, load_scenario
from .netlink import LinkConfig, SimulatedLink
from .supervisor import CaseConfig, TrialMetrics, run_trial

__all__ = [
    "Pose2D", "Twist", "Circle", "Rect", "wrap_angle",
    "CouplingGains", "integrate_unicycle", "integrate_omni", "scale_twist",
    "ForceParams", "ForceVector", "compute_force", "reactive_twist",
    "VelocityMux",
    "WorldSpec", "WorldState", "LaserScan", "load_scenario",
    "LinkConfig", "SimulatedLink",
    "CaseConfig", "TrialMetrics", "run_trial",
]
