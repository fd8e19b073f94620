"""Discrete Hermite wavelet transform (DHWT) and a level-threshold image codec."""

from .errors import ContainerError, DHWTError, UnknownWaveletError
from .filters import (
    FilterPair,
    available_wavelets,
    dhwt_filter,
    get_filter,
    standard_filter,
    verify_pr,
)
from .transform import SubbandPyramid, decompose, reconstruct
from .codec import (
    CompressedImage,
    ThresholdSchedule,
    compress_image,
    compression_loop,
    decompress_image,
)
from .metrics import QualityReport, comparison_table
from .testimage import synthetic_image

__version__ = "0.1.0"
