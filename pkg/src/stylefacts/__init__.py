"""Three-trader agent-based market model and stylised-facts statistics."""
from .market import SimulationOutput, price_update, proportional_return, run_simulation
from .params import ModelParams, trader_set

__all__ = ["ModelParams", "SimulationOutput", "price_update", "proportional_return",
           "run_simulation", "trader_set"]
