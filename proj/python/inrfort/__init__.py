"""Coordinate-network robustness toolkit.

Fit SIREN networks to images, audio and video, train them with a
gradient-norm penalty, and measure reconstruction quality under weight
perturbations.
"""

from ._core import (
    ConfigError,
    Dataset,
    IoError,
    Model,
    NumericError,
    SirenConfig,
    eval_loss,
    init_siren,
    load_signal,
    make_coord_grid,
    noisy_psnr,
    perturb,
    psnr,
    reconstruction_psnr,
    run_selfcheck,
    save_audio,
    save_image,
    taylor_gap,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Dataset",
    "IoError",
    "Model",
    "NumericError",
    "SirenConfig",
    "eval_loss",
    "init_siren",
    "load_signal",
    "make_coord_grid",
    "noisy_psnr",
    "perturb",
    "psnr",
    "reconstruction_psnr",
    "run_selfcheck",
    "save_audio",
    "save_image",
    "taylor_gap",
    "train",
    "__version__",
]
