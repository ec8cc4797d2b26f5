"""Keyword projection tests.

PCA expectations are hand-computed. For the 4-point oracle the input is
already centered, so the principal axes are the coordinate axes and the
projections can be read off directly. Cluster purity is recomputed here
by brute force so the packaged helper is cross-checked, not trusted.
"""

from __future__ import annotations

import math
import struct
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triz_workbench.config import ProjectionConfig
from triz_workbench.errors import UsageError
from triz_workbench.gateway import FakeBackend, Gateway
from triz_workbench.projection import (
    KeywordPoint,
    ProjectionResult,
    WordVectors,
    nearest_neighbor_purity,
    pca_2d,
    project_keywords,
)


def brute_force_purity(points: list[KeywordPoint]) -> float:
    same = 0
    for i, p in enumerate(points):
        best_j, best_d = None, math.inf
        for j, q in enumerate(points):
            if j == i:
                continue
            d = (p.x - q.x) ** 2 + (p.y - q.y) ** 2
            if d < best_d:
                best_j, best_d = j, d
        if points[best_j].source == p.source:
            same += 1
    return same / len(points)


def vectors_from(mapping: dict[str, list[float]]) -> WordVectors:
    dim = len(next(iter(mapping.values())))
    return WordVectors({k: np.array(v, dtype=float) for k, v in mapping.items()}, dim)


# -- PCA oracle ----------------------------------------------------------------


class TestPcaOracle:
    def test_axis_aligned_points_project_onto_axes(self):
        # Centered input; PC1 = x axis (variance 8 > 2), PC2 = y axis.
        x = np.array(
            [[2.0, 0.0, 0.0], [-2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0]]
        )
        out = pca_2d(x)
        expected = np.array([[2.0, 0.0], [-2.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        assert np.allclose(out, expected, atol=1e-12)

    def test_collinear_points_collapse_to_one_axis(self):
        x = np.array([[1.0, 1.0, 1.0], [2.0, 2.0, 2.0], [3.0, 3.0, 3.0]])
        out = pca_2d(x)
        root3 = math.sqrt(3.0)
        assert np.allclose(out[:, 0], [-root3, 0.0, root3], atol=1e-12)
        assert np.allclose(out[:, 1], 0.0, atol=1e-9)

    def test_translation_invariance(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=(12, 5))
        shifted = x + np.array([100.0, -3.0, 0.5, 9.0, 1.0])
        assert np.allclose(pca_2d(x), pca_2d(shifted), atol=1e-9)

    def test_deterministic_across_calls(self):
        rng = np.random.default_rng(11)
        x = rng.normal(size=(20, 30))
        first = pca_2d(x)
        second = pca_2d(x.copy())
        assert first.tobytes() == second.tobytes()

    def test_two_dim_input_padded_not_crashed(self):
        # Rank 1 in a single column: second projection axis is degenerate.
        x = np.array([[1.0], [2.0], [4.0]])
        out = pca_2d(x)
        assert out.shape == (3, 2)
        assert np.allclose(out[:, 1], 0.0)

    @given(
        seed=st.integers(min_value=0, max_value=10_000),
        n=st.integers(min_value=3, max_value=15),
        d=st.integers(min_value=1, max_value=20),
    )
    @settings(max_examples=60, deadline=None)
    def test_projection_preserves_count_and_is_finite(self, seed, n, d):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(n, d))
        out = pca_2d(x)
        assert out.shape == (n, 2)
        assert np.isfinite(out).all()


# -- project_keywords ----------------------------------------------------------


ORTHO = {
    "alpha": [4.0, 0.0, 0.0, 0.0],
    "beta": [0.0, 4.0, 0.0, 0.0],
    "gamma": [0.0, 0.0, 4.0, 0.0],
}


class TestProjectKeywords:
    def keywords(self):
        return [
            ("alpha", "ground-truth"),
            ("beta", "gpt-4"),
            ("gamma", "gpt-3.5"),
        ]

    def test_orthogonal_vectors_give_distinct_points(self):
        result = project_keywords(
            self.keywords(), method="pca", vectors=vectors_from(ORTHO)
        )
        assert isinstance(result, ProjectionResult)
        assert result.method == "pca"
        assert len(result.points) == 3
        assert result.findings == []
        for i in range(3):
            for j in range(i + 1, 3):
                a, b = result.points[i], result.points[j]
                assert (a.x - b.x) ** 2 + (a.y - b.y) ** 2 > 0.0

    def test_labels_and_sources_preserved_in_order(self):
        result = project_keywords(
            self.keywords(), method="pca", vectors=vectors_from(ORTHO)
        )
        assert [(p.label, p.source) for p in result.points] == self.keywords()

    def test_duplicate_keyword_coincides(self):
        kws = self.keywords() + [("alpha", "gpt-4")]
        result = project_keywords(kws, method="pca", vectors=vectors_from(ORTHO))
        first, last = result.points[0], result.points[3]
        assert (first.x, first.y) == (last.x, last.y)

    def test_multi_word_phrase_uses_token_mean(self):
        vecs = vectors_from(ORTHO)
        combined = project_keywords(
            [("alpha beta", "s"), ("gamma", "s"), ("alpha", "s")],
            method="pca",
            vectors=vecs,
        )
        # "alpha beta" embeds as mean([4,0,0,0],[0,4,0,0]) = [2,2,0,0]:
        # distinct from both tokens alone.
        pts = combined.points
        assert (pts[0].x, pts[0].y) != (pts[2].x, pts[2].y)

    def test_oov_token_skipped_inside_phrase(self):
        vecs = vectors_from(ORTHO)
        mixed = project_keywords(
            [("alpha zzz", "s"), ("beta", "s"), ("gamma", "s")],
            method="pca",
            vectors=vecs,
        )
        pure = project_keywords(
            [("alpha", "s"), ("beta", "s"), ("gamma", "s")],
            method="pca",
            vectors=vecs,
        )
        # the in-vocab token carries the phrase; projections agree
        for a, b in zip(mixed.points, pure.points):
            assert a.x == pytest.approx(b.x, abs=1e-12)
            assert a.y == pytest.approx(b.y, abs=1e-12)

    def test_fully_oov_phrase_flagged_and_omitted(self):
        result = project_keywords(
            self.keywords() + [("zzz qqq", "gpt-4")],
            method="pca",
            vectors=vectors_from(ORTHO),
        )
        assert len(result.points) == 3
        assert len(result.findings) == 1
        finding = result.findings[0]
        assert finding.label == "zzz qqq"
        assert "out of vocabulary" in finding.message

    def test_case_falls_back_to_lowercase_lookup(self):
        result = project_keywords(
            [("Alpha", "s"), ("beta", "s"), ("gamma", "s")],
            method="pca",
            vectors=vectors_from(ORTHO),
        )
        assert result.findings == []
        assert len(result.points) == 3

    def test_fewer_than_three_keywords_rejected(self):
        with pytest.raises(UsageError, match="at least 3"):
            project_keywords(
                [("alpha", "s"), ("beta", "s")],
                method="pca",
                vectors=vectors_from(ORTHO),
            )

    def test_too_few_embeddable_keywords_rejected(self):
        with pytest.raises(UsageError, match="could be embedded"):
            project_keywords(
                [("alpha", "s"), ("zzz", "s"), ("qqq", "s")],
                method="pca",
                vectors=vectors_from(ORTHO),
            )

    def test_unknown_method_rejected(self):
        with pytest.raises(UsageError, match="unknown projection method"):
            project_keywords(
                self.keywords(), method="tsne", vectors=vectors_from(ORTHO)
            )

    def test_no_source_configured_rejected(self):
        with pytest.raises(UsageError, match="word-vector"):
            project_keywords(self.keywords(), method="pca")

    def test_umap_without_package_is_a_clear_config_error(self):
        try:
            import umap  # noqa: F401
        except ImportError:
            with pytest.raises(UsageError, match="umap-learn"):
                project_keywords(
                    self.keywords(), method="umap", vectors=vectors_from(ORTHO)
                )
        else:
            pytest.skip("umap-learn installed; error path not reachable")


class TestClusterPurity:
    def make_clusters(self, seed: int = 3):
        # Two clusters in 20-D: unit-scale noise around centers 25 apart
        # (separation 5x the intra-cluster spread of ~5, comfortably).
        rng = np.random.default_rng(seed)
        center_a = np.zeros(20)
        center_b = np.zeros(20)
        center_b[0] = 25.0
        keywords = []
        mapping = {}
        for i in range(10):
            token = f"a{i}"
            mapping[token] = center_a + rng.normal(scale=1.0, size=20)
            keywords.append((token, "ground-truth"))
        for i in range(10):
            token = f"b{i}"
            mapping[token] = center_b + rng.normal(scale=1.0, size=20)
            keywords.append((token, "gpt-4"))
        return keywords, vectors_from({k: list(v) for k, v in mapping.items()})

    def test_two_cluster_purity_at_least_point_nine(self):
        keywords, vecs = self.make_clusters()
        result = project_keywords(keywords, method="pca", vectors=vecs)
        assert len(result.points) == 20
        purity = brute_force_purity(result.points)
        assert purity >= 0.9
        # packaged helper agrees with the brute-force recomputation
        assert nearest_neighbor_purity(result.points) == purity

    def test_purity_holds_across_seeds(self):
        for seed in range(5):
            keywords, vecs = self.make_clusters(seed)
            result = project_keywords(keywords, method="pca", vectors=vecs)
            assert brute_force_purity(result.points) >= 0.9

    def test_projection_is_reproducible(self):
        keywords, vecs = self.make_clusters()
        a = project_keywords(keywords, method="pca", vectors=vecs)
        b = project_keywords(keywords, method="pca", vectors=vecs)
        assert a == b


# -- word-vector file loading ----------------------------------------------------


class TestWordVectorFiles:
    TOKENS = {
        "alpha": [1.0, 2.0, 3.0],
        "beta": [-1.0, 0.5, 0.0],
        "gamma": [0.0, 0.0, 1.0],
    }

    def write_text_format(self, path: Path) -> None:
        lines = [f"{len(self.TOKENS)} 3"]
        for token, vec in self.TOKENS.items():
            lines.append(token + " " + " ".join(str(v) for v in vec))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    def write_binary_format(self, path: Path, *, trailing_newline: bool) -> None:
        blob = f"{len(self.TOKENS)} 3\n".encode("utf-8")
        for token, vec in self.TOKENS.items():
            blob += token.encode("utf-8") + b" "
            blob += struct.pack("<3f", *vec)
            if trailing_newline:
                blob += b"\n"
        path.write_bytes(blob)

    def test_text_layout_loads(self, tmp_path):
        path = tmp_path / "vectors.txt"
        self.write_text_format(path)
        vecs = WordVectors.load(path)
        assert vecs.dim == 3
        assert np.allclose(vecs.get("alpha"), [1.0, 2.0, 3.0])
        assert vecs.get("missing") is None

    def test_binary_layout_loads_with_suffix_detection(self, tmp_path):
        path = tmp_path / "vectors.bin"
        self.write_binary_format(path, trailing_newline=True)
        vecs = WordVectors.load(path)
        assert vecs.dim == 3
        assert np.allclose(vecs.get("beta"), [-1.0, 0.5, 0.0], atol=1e-6)

    def test_binary_without_trailing_newlines_loads(self, tmp_path):
        # gensim writes no separator between records
        path = tmp_path / "vectors.bin"
        self.write_binary_format(path, trailing_newline=False)
        vecs = WordVectors.load(path)
        assert np.allclose(vecs.get("gamma"), [0.0, 0.0, 1.0], atol=1e-6)

    def test_explicit_binary_flag_overrides_suffix(self, tmp_path):
        path = tmp_path / "vectors.dat"
        self.write_binary_format(path, trailing_newline=True)
        vecs = WordVectors.load(path, binary=True)
        assert np.allclose(vecs.get("alpha"), [1.0, 2.0, 3.0], atol=1e-6)

    def test_vocab_limit_truncates(self, tmp_path):
        path = tmp_path / "vectors.txt"
        self.write_text_format(path)
        vecs = WordVectors.load(path, limit=2)
        assert vecs.get("alpha") is not None
        assert vecs.get("gamma") is None

    def test_missing_file_is_a_config_error(self, tmp_path):
        cfg = ProjectionConfig(word_vector_path=tmp_path / "absent.txt")
        with pytest.raises(UsageError, match="word-vector file"):
            project_keywords(
                [("a", "s"), ("b", "s"), ("c", "s")], method="pca", config=cfg
            )

    def test_config_path_drives_projection(self, tmp_path):
        path = tmp_path / "vectors.txt"
        self.write_text_format(path)
        cfg = ProjectionConfig(word_vector_path=path)
        result = project_keywords(
            [("alpha", "s"), ("beta", "s"), ("gamma", "s")],
            method="pca",
            config=cfg,
        )
        assert len(result.points) == 3

    def test_phrase_mean_of_tokens(self, tmp_path):
        path = tmp_path / "vectors.txt"
        self.write_text_format(path)
        vecs = WordVectors.load(path)
        phrase = vecs.phrase("alpha beta")
        assert np.allclose(phrase, [0.0, 1.25, 1.5])
        assert vecs.phrase("zzz qqq") is None


class TestGatewayFallback:
    def test_embedding_api_used_when_no_vector_file(self):
        backend = FakeBackend()
        backend.embeddings["alpha"] = (4.0, 0.0, 0.0, 0.0)
        backend.embeddings["beta"] = (0.0, 4.0, 0.0, 0.0)
        backend.embeddings["gamma"] = (0.0, 0.0, 4.0, 0.0)
        gateway = Gateway(backend, clock=lambda: 0.0)
        result = project_keywords(
            [("alpha", "ground-truth"), ("beta", "gpt-4"), ("gamma", "gpt-3.5")],
            method="pca",
            gateway=gateway,
        )
        assert len(result.points) == 3
        # whole phrases go out in one batch; no tokenization on this path
        assert backend.embed_calls == [("alpha", "beta", "gamma")]

    def test_vector_file_preferred_over_gateway(self, tmp_path):
        path = tmp_path / "vectors.txt"
        TestWordVectorFiles().write_text_format(path)
        backend = FakeBackend()
        gateway = Gateway(backend, clock=lambda: 0.0)
        project_keywords(
            [("alpha", "s"), ("beta", "s"), ("gamma", "s")],
            method="pca",
            config=ProjectionConfig(word_vector_path=path),
            gateway=gateway,
        )
        assert backend.embed_calls == []
