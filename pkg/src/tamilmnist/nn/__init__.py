from .adam import Adam
from .checkpoint import load_checkpoint, save_checkpoint
from .model import (
    Model,
    build_cnn_model,
    build_fc_model,
    build_model,
    init_params,
    param_count,
)

__all__ = [
    "Adam",
    "Model",
    "build_cnn_model",
    "build_fc_model",
    "build_model",
    "init_params",
    "param_count",
    "load_checkpoint",
    "save_checkpoint",
]
