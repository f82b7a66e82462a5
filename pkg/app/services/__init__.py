from app.services.ground import make_pair
from app.services.packets import w_exp_ss, weight_set
from app.services.sweep import sweep

__all__ = ["make_pair", "w_exp_ss", "weight_set", "sweep"]
