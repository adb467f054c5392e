"""Desk-scale face dataset: build, store, split, and iterate aligned crops."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .toyfaces import REGION_NAMES, render_face, sample_identity, sample_variation

DATASET_FILE = "toyfaces.npz"


@dataclass
class FaceDataset:
    """Aligned face crops with identity labels, landmarks and region masks.

    Splits are by identity: train identities feed both training stages,
    val identities drive calibration/early metrics, test identities are
    held out for acceptance-style evaluation.
    """

    images: np.ndarray  # (N, S, S, 3) float32 in [0, 1]
    labels: np.ndarray  # (N,) int64 identity index
    landmarks: np.ndarray  # (N, 5, 2) float32
    masks: np.ndarray  # (N, 5, S, S) uint8
    split_of_identity: np.ndarray  # (num_identities,) of {"train","val","test"}
    seed: int

    @property
    def resolution(self) -> int:
        return int(self.images.shape[1])

    @property
    def num_identities(self) -> int:
        return int(self.labels.max()) + 1

    def indices(self, split: str) -> np.ndarray:
        ids = np.where(self.split_of_identity == split)[0]
        return np.where(np.isin(self.labels, ids))[0]

    def subset(self, split: str) -> "FaceDataset":
        idx = self.indices(split)
        return FaceDataset(
            images=self.images[idx],
            labels=self.labels[idx],
            landmarks=self.landmarks[idx],
            masks=self.masks[idx],
            split_of_identity=self.split_of_identity,
            seed=self.seed,
        )

    def genuine_impostor_pairs(
        self, rng: np.random.Generator, max_genuine: int = 2000, max_impostor: int = 4000
    ) -> tuple[np.ndarray, np.ndarray]:
        """Index pairs (i, j) with matching / non-matching identity labels."""
        n = len(self.labels)
        genuine, impostor = [], []
        for i in range(n):
            for j in range(i + 1, n):
                (genuine if self.labels[i] == self.labels[j] else impostor).append((i, j))
        genuine = np.array(genuine)
        impostor = np.array(impostor)
        if len(genuine) > max_genuine:
            genuine = genuine[rng.choice(len(genuine), max_genuine, replace=False)]
        if len(impostor) > max_impostor:
            impostor = impostor[rng.choice(len(impostor), max_impostor, replace=False)]
        return genuine, impostor

    def save(self, directory: str | Path) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / DATASET_FILE
        np.savez_compressed(
            path,
            images=self.images,
            labels=self.labels,
            landmarks=self.landmarks,
            masks=self.masks,
            split_of_identity=self.split_of_identity,
            seed=np.int64(self.seed),
        )
        return path

    @staticmethod
    def load(directory: str | Path) -> "FaceDataset":
        path = Path(directory)
        if path.is_dir():
            path = path / DATASET_FILE
        if not path.exists():
            raise FileNotFoundError(f"dataset not found at {path}; run `faceveil dataset build` first")
        raw = np.load(path, allow_pickle=False)
        return FaceDataset(
            images=raw["images"],
            labels=raw["labels"],
            landmarks=raw["landmarks"],
            masks=raw["masks"],
            split_of_identity=raw["split_of_identity"],
            seed=int(raw["seed"]),
        )


def build_dataset(
    num_identities: int = 62,
    images_per_identity: int = 12,
    resolution: int = 64,
    seed: int = 0,
    val_identities: int = 8,
    test_identities: int = 8,
) -> FaceDataset:
    if num_identities < val_identities + test_identities + 2:
        raise ValueError("not enough identities for the requested splits")
    master = np.random.default_rng(seed)
    images, labels, lms, masks = [], [], [], []
    for ident_idx in range(num_identities):
        ident_rng = np.random.default_rng(master.integers(2**63))
        ident = sample_identity(ident_rng)
        for _ in range(images_per_identity):
            var = sample_variation(ident_rng)
            fr = render_face(ident, var, size=resolution)
            images.append(fr.image)
            labels.append(ident_idx)
            lms.append(fr.landmarks)
            masks.append(fr.region_masks)
    order = master.permutation(num_identities)
    split = np.array(["train"] * num_identities, dtype="U5")
    split[order[:val_identities]] = "val"
    split[order[val_identities : val_identities + test_identities]] = "test"
    return FaceDataset(
        images=np.stack(images),
        labels=np.asarray(labels, dtype=np.int64),
        landmarks=np.stack(lms),
        masks=np.stack(masks),
        split_of_identity=split,
        seed=seed,
    )


def region_names() -> tuple[str, ...]:
    return REGION_NAMES
