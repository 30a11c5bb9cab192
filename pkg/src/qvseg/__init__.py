"""Quantum moving-target segmentation for grayscale video, simulated exactly."""

from .blocks import (build_abs_subtractor, build_and, build_binarization, build_comparator,
                     build_copy, build_cycle_shift, build_subtractor, build_threshold_compare)
from .classical import abs_diff_frames, classical_three_frame_diff, threshold_frame
from .core import (Circuit, CostReport, Gate, Histogram, SparseState, measure, new_circuit,
                   quantum_cost, run_dense_trajectory, run_sparse, sample_dense)
from .encoding import (RegisterLayout, Video, decode_histogram, decode_segmentation,
                       encode_video, layout_for, validate_video)
from .errors import (CorruptState, IncompleteSampling, InvalidArgument, InvalidGate,
                     QVSegError, Unsupported)
from .pipeline import (SegmentationResult, build_segmentation_circuit, qubit_and_cost_summary,
                       segment_video)

__version__ = "0.1.0"
