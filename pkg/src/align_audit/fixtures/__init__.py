"""Bundled demonstration datasets.

Both CSVs are synthetic replicas generated by scripts/generate_fixtures.py
in the repository: they match the published row counts, group sizes, and
per-feature distributions of the well-known survival and diabetes tables
closely enough to exercise the full pipeline, without shipping anyone's
actual records.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class FixtureDataset:
    """Name, file, target column, and curated feature list of one fixture."""

    name: str
    filename: str
    target: str
    features: tuple[str, ...]

    @property
    def path(self):
        return Path(__file__).parent / self.filename


TITANIC = FixtureDataset(
    name="titanic",
    filename="titanic.csv",
    target="Survived",
    features=("Pclass", "Sex", "Age", "SibSp", "Parch", "Fare", "Embarked"),
)

PIMA = FixtureDataset(
    name="pima",
    filename="pima.csv",
    target="Outcome",
    features=("Pregnancies", "Glucose", "BloodPressure", "SkinThickness",
              "Insulin", "BMI", "DiabetesPedigreeFunction", "Age"),
)

REGISTRY = {f.name: f for f in (TITANIC, PIMA)}


def get(name):
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(
            f"unknown fixture {name!r}; available: {sorted(REGISTRY)}"
        ) from None
