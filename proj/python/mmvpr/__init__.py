"""Multi-modal visual place recognition.

Semantic maps are encoded with spatial-pyramid matching, images with a
bag-of-visual-words model over binary descriptors, and retrieval fuses the two
cosine similarities with a weighted sum. The heavy lifting lives in the C++
extension; this package re-exports it.
"""

from mmvpr._core import (
    Index,
    MmvprError,
    Vocabulary,
    argmax_map,
    build_vocab,
    class_names,
    confusion,
    cosine,
    describe,
    detect_keypoints,
    encode_bow,
    encode_spm,
    generate_landmark,
    img_scores,
    one_hot,
    read_code,
    read_image,
    read_label_map,
    read_prob_map,
    run_cli,
    seg_scores,
    spm_code_length,
    spm_weight,
    to_gray,
    top_percent_cutoff,
    weighted_ce,
    write_code,
    write_image,
    write_label_map,
    write_prob_map,
)

__all__ = [
    "Index",
    "MmvprError",
    "Vocabulary",
    "argmax_map",
    "build_vocab",
    "class_names",
    "confusion",
    "cosine",
    "describe",
    "detect_keypoints",
    "encode_bow",
    "encode_spm",
    "generate_landmark",
    "img_scores",
    "one_hot",
    "read_code",
    "read_image",
    "read_label_map",
    "read_prob_map",
    "run_cli",
    "seg_scores",
    "spm_code_length",
    "spm_weight",
    "to_gray",
    "top_percent_cutoff",
    "weighted_ce",
    "write_code",
    "write_image",
    "write_label_map",
    "write_prob_map",
]

__version__ = "0.1.0"
