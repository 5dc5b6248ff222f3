"""Space-frequency non-local means denoising for grayscale images."""

from .fileio import ImageFormatError, read_image, write_image
from .fnlm import AnnulusIndex, FrequencyParams, build_annulus_index, fnlm_filter
from .image import IdenticalImagesError, NoiseModel, add_gaussian_noise, psnr
from .nlm import SpatialParams, nlm_filter, patch_distance
from .patches import patch_weights
from .pipeline import SfnlmConfig, fnlm_denoise, fourier_better_map, sfnlm_denoise
from .spectral import (
    HalfPlaneIndex,
    Spectrum,
    build_half_plane,
    forward_dft,
    inverse_dft,
    reconstruct_full,
)

__version__ = "0.1.0"
