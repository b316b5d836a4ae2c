"""Smoke tests for the python module: thin checks that the bindings round-trip
values faithfully and that a miniature pipeline works end to end."""

import math

import numpy as np
import pytest

import mmvpr


def test_argmax_and_one_hot():
    probs = np.array([[[0.1, 0.7, 0.2]]], dtype=np.float32)
    labels = mmvpr.argmax_map(probs)
    assert labels.shape == (1, 1)
    assert labels[0, 0] == 1

    tie = np.array([[[0.5, 0.5]]], dtype=np.float32)
    assert mmvpr.argmax_map(tie)[0, 0] == 0

    grid = np.array([[0, 1], [2, 0]], dtype=np.uint16)
    round_trip = mmvpr.argmax_map(mmvpr.one_hot(grid, 3))
    assert (round_trip == grid).all()


def test_seg_scores_two_pixel_case():
    gt = np.array([[0, 1]], dtype=np.uint16)
    pred = np.array([[1, 1]], dtype=np.uint16)
    cm = mmvpr.confusion(gt, pred, 2)
    assert cm.tolist() == [[0, 1], [0, 1]]
    scores = mmvpr.seg_scores(cm)
    assert scores["pa"] == pytest.approx(0.5)
    assert scores["miou"] == pytest.approx(0.25)
    assert scores["fwiou"] == pytest.approx(0.25)
    assert scores["per_class_iou"] == [pytest.approx(0.0), pytest.approx(0.5)]


def test_weighted_ce_scalar():
    probs = np.array([[[0.9, 0.1]]], dtype=np.float32)
    gt = np.array([[0]], dtype=np.uint16)
    value = mmvpr.weighted_ce(probs, gt, [0.2, 0.8])
    assert value == pytest.approx(0.52984692307942075, abs=1e-6)

    zero = np.array([[[0.0, 1.0]]], dtype=np.float32)
    with pytest.raises(mmvpr.MmvprError):
        mmvpr.weighted_ce(zero, gt, [0.2, 0.8])


def test_img_scores_identity():
    rng = np.random.RandomState(3)
    img = rng.randint(0, 256, size=(16, 16), dtype=np.uint8)
    scores = mmvpr.img_scores(img, img)
    assert scores["l1_pct"] == 0.0
    assert scores["psnr"] == 100.0
    assert scores["ssim"] == pytest.approx(1.0)


def test_spm_worked_example():
    assert mmvpr.spm_weight(0, 2) == 0.25
    assert mmvpr.spm_code_length(2, 8) == 168
    labels = np.array([[0, 0], [0, 1]], dtype=np.uint16)
    code = mmvpr.encode_spm(labels, 2, 1)
    assert code.tolist() == [1.5, 0.5, 0.5, 0.0, 0.5, 0.0, 0.5, 0.0, 0.0, 0.5]


def test_bow_dot_image():
    img = np.zeros((41, 41), dtype=np.uint8)
    img[20, 20] = 255
    kps = mmvpr.detect_keypoints(img, max_keypoints=10, threshold=20)
    assert kps == [(20, 20, pytest.approx(16 * 255.0))]
    d = mmvpr.describe(img, 20, 20)
    assert len(d) == 32
    assert mmvpr.describe(img, 20, 20) == d


def test_vocab_and_index_round_trip(tmp_path):
    rng = np.random.RandomState(7)
    descriptors = [bytes(rng.randint(0, 256, size=32, dtype=np.uint8)) for _ in range(12)]
    vocab = mmvpr.build_vocab(descriptors, word_count=4, seed=11)
    assert vocab.size == 4
    vocab.save(str(tmp_path / "v.mmvc"))
    back = mmvpr.Vocabulary.load(str(tmp_path / "v.mmvc"))
    assert back.size == 4
    assert back.word(2) == vocab.word(2)

    index = mmvpr.Index(levels=0, num_classes=2)
    index.add(5, np.array([1.0, 0.0]), np.array([3.0, 1.0]))
    index.add(9, np.array([0.0, 1.0]), np.array([1.0, 3.0]))
    ranked = index.query(np.array([1.0, 0.0]), np.array([3.0, 1.0]), k=2, alpha=0.5)
    assert ranked[0][0] == 5
    assert ranked[0][1] == pytest.approx(1.0)

    index.save(str(tmp_path / "i.mmvi"))
    loaded = mmvpr.Index.load(str(tmp_path / "i.mmvi"))
    assert loaded.ids == [5, 9]
    again = loaded.query(np.array([1.0, 0.0]), np.array([3.0, 1.0]), k=1, alpha=0.5)
    assert again[0][0] == 5


def test_io_round_trips(tmp_path):
    rng = np.random.RandomState(13)
    img = rng.randint(0, 256, size=(6, 5, 3), dtype=np.uint8)
    mmvpr.write_image(str(tmp_path / "img.ppm"), img)
    assert (mmvpr.read_image(str(tmp_path / "img.ppm")) == img).all()

    labels = rng.randint(0, 4, size=(4, 4)).astype(np.uint16)
    mmvpr.write_label_map(str(tmp_path / "labels.pgm"), labels, 4)
    assert (mmvpr.read_label_map(str(tmp_path / "labels.pgm"), 4) == labels).all()

    code = np.array([0.5, -1.25, 3.0])
    mmvpr.write_code(str(tmp_path / "c.mmfv"), code)
    assert mmvpr.read_code(str(tmp_path / "c.mmfv")).tolist() == code.tolist()


def test_generate_landmark_is_deterministic():
    a = mmvpr.generate_landmark(seed=3, height=48, width=48, num_classes=8, id=1)
    b = mmvpr.generate_landmark(seed=3, height=48, width=48, num_classes=8, id=1)
    assert (a["static_image"] == b["static_image"]).all()
    assert (a["labels"] == b["labels"]).all()
    diff = a["dynamic_image"] != a["static_image"]
    assert diff[a["dynamic_mask"] == 1].all()


def test_cli_pipeline(tmp_path):
    ds = str(tmp_path / "ds")
    vocab = str(tmp_path / "v.mmvc")
    index = str(tmp_path / "i.mmvi")
    code, out, err = mmvpr.run_cli(
        ["synth", "--out", ds, "--landmarks", "4", "--height", "64", "--width", "64", "--seed", "2"]
    )
    assert code == 0, err
    assert "config:" in out
    code, _, err = mmvpr.run_cli(
        ["build-vocab", "--dataset", ds, "--out", vocab, "--words", "16", "--max-kp", "60"]
    )
    assert code == 0, err
    code, _, err = mmvpr.run_cli(
        ["index", "--dataset", ds, "--vocab", vocab, "--out", index, "--levels", "1", "--max-kp", "60"]
    )
    assert code == 0, err
    csv = str(tmp_path / "recall.csv")
    code, _, err = mmvpr.run_cli(
        ["eval-recall", "--index", index, "--vocab", vocab, "--dataset", ds, "--max-kp", "60",
         "--csv", csv]
    )
    assert code == 0, err
    rows = dict(
        line.split(",")[0::2] for line in open(csv).read().splitlines()[1:]
    )
    assert float(rows["R@1"]) == 1.0

    code, _, err = mmvpr.run_cli(["query", "--index", "/does/not/exist", "--vocab", vocab,
                                  "--image", ds + "/lm00000/static.pgm", "--labels",
                                  ds + "/lm00000/labels.pgm"])
    assert code != 0
    assert err.startswith("error: ")


def test_recall_cutoff_helper():
    assert mmvpr.top_percent_cutoff(2691) == 27
    assert mmvpr.top_percent_cutoff(50) == 1
    assert math.isclose(mmvpr.cosine(np.array([1.0, 0.0]), np.array([1.0, 0.0])), 1.0)
    assert mmvpr.cosine(np.zeros(3), np.zeros(3)) == 1.0
    assert mmvpr.cosine(np.zeros(3), np.array([1.0, 0.0, 0.0])) == 0.0
