"""Discrete-event simulator of a partitioned heterogeneous SoC.

The heavy lifting lives in the compiled extension; this package
re-exports its public surface.
"""

from ._core import (
    BoundingBox,
    Tensor,
    bench_suite,
    cloud_coverage,
    conv2d,
    decode_and_nms,
    dequantize,
    embed_blob,
    iou,
    load_blob,
    maxpool2d,
    quantize,
    run_inference,
    run_scenario,
    run_trace,
    upsample2d_nearest,
    validate_scenario,
    __version__,
)

__all__ = [
    "BoundingBox",
    "Tensor",
    "bench_suite",
    "cloud_coverage",
    "conv2d",
    "decode_and_nms",
    "dequantize",
    "embed_blob",
    "iou",
    "load_blob",
    "maxpool2d",
    "quantize",
    "run_inference",
    "run_scenario",
    "run_trace",
    "upsample2d_nearest",
    "validate_scenario",
    "__version__",
]
