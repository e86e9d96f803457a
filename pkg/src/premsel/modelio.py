"""Deterministic binary container for trained retrieval models.

Layout: magic line, 8-byte little-endian header length, UTF-8 JSON header
(format version, method, strategy, hyperparameters, array manifest), then the
raw little-endian array bytes in manifest order.  No timestamps anywhere, so
equal models produce byte-identical files.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .pvdbow import PvDbowHyperparams, PvDbowModel
from .tfidf import TfIdfModel
from .tokenizer import Strategy

MAGIC = b"PREMSELMODEL\n"
FORMAT_VERSION = 1


def _array_entries(arrays: dict[str, np.ndarray]) -> list[dict]:
    return [
        {"name": name, "dtype": str(arr.dtype), "shape": list(arr.shape)}
        for name, arr in arrays.items()
    ]


def _write(path: Path, header: dict, arrays: dict[str, np.ndarray]) -> None:
    header = dict(header)
    header["format_version"] = FORMAT_VERSION
    header["arrays"] = _array_entries(arrays)
    blob = json.dumps(header, ensure_ascii=False, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        for arr in arrays.values():
            fh.write(np.ascontiguousarray(arr).astype(arr.dtype.newbyteorder("<")).tobytes())


def _read(path: Path) -> tuple[dict, dict[str, np.ndarray]]:
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise ValueError(f"{path}: not a premsel model file")
        (header_len,) = struct.unpack("<Q", fh.read(8))
        header = json.loads(fh.read(header_len).decode("utf-8"))
        if header.get("format_version") != FORMAT_VERSION:
            raise ValueError(
                f"{path}: unsupported model format version {header.get('format_version')!r}"
            )
        arrays = {}
        for entry in header["arrays"]:
            dtype = np.dtype(entry["dtype"]).newbyteorder("<")
            count = int(np.prod(entry["shape"])) if entry["shape"] else 1
            buf = fh.read(count * dtype.itemsize)
            arrays[entry["name"]] = np.frombuffer(buf, dtype=dtype).reshape(entry["shape"]).astype(
                np.dtype(entry["dtype"])
            )
    return header, arrays


def save_model(model: TfIdfModel | PvDbowModel, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if model.method == "tfidf":
        matrix = model.matrix.tocsr()
        matrix.sort_indices()
        header = {
            "method": "tfidf",
            "strategy": model.strategy.value,
            "corpus_size": model.corpus_size,
            "vocabulary": sorted(model.vocabulary, key=model.vocabulary.get),
            "doc_ids": list(model.doc_ids),
            "matrix_shape": list(matrix.shape),
        }
        arrays = {
            "document_frequencies": model.document_frequencies,
            "matrix_data": matrix.data,
            "matrix_indices": matrix.indices.astype(np.int64),
            "matrix_indptr": matrix.indptr.astype(np.int64),
        }
    else:
        header = {
            "method": "pvdbow",
            "strategy": model.strategy.value,
            "hyperparams": model.hyperparams.to_obj(),
            "vocabulary": sorted(model.vocabulary, key=model.vocabulary.get),
            "doc_ids": list(model.doc_ids),
            "epoch_losses": list(model.epoch_losses),
        }
        arrays = {
            "doc_vectors": model.doc_vectors,
            "word_output_weights": model.word_output_weights,
            "noise_cdf": model.noise_cdf,
        }
    _write(path, header, arrays)
    return path


def load_model(path: str | Path) -> TfIdfModel | PvDbowModel:
    header, arrays = _read(Path(path))
    vocabulary = {tok: i for i, tok in enumerate(header["vocabulary"])}
    strategy = Strategy(header["strategy"])
    if header["method"] == "tfidf":
        matrix = sp.csr_matrix(
            (arrays["matrix_data"], arrays["matrix_indices"], arrays["matrix_indptr"]),
            shape=tuple(header["matrix_shape"]),
        )
        return TfIdfModel(
            strategy=strategy,
            vocabulary=vocabulary,
            document_frequencies=arrays["document_frequencies"],
            corpus_size=header["corpus_size"],
            doc_ids=tuple(header["doc_ids"]),
            matrix=matrix,
        )
    if header["method"] == "pvdbow":
        return PvDbowModel(
            strategy=strategy,
            hyperparams=PvDbowHyperparams(**header["hyperparams"]),
            vocabulary=vocabulary,
            doc_ids=tuple(header["doc_ids"]),
            doc_vectors=arrays["doc_vectors"],
            word_output_weights=arrays["word_output_weights"],
            noise_cdf=arrays["noise_cdf"],
            epoch_losses=tuple(header["epoch_losses"]),
        )
    raise ValueError(f"{path}: unknown model method {header['method']!r}")
