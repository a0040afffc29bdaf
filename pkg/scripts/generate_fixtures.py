"""Regenerate the bundled demonstration CSVs.

Both tables are synthetic. They reproduce the headline structure of two
classic public benchmarks (row counts, class balance, group means and
spreads, missingness pattern) from published summary statistics, but every
row is sampled fresh from seeded generators, so no original record appears.

Run from the repository root:

    python3 scripts/generate_fixtures.py
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "align_audit" / "fixtures"

# ---------------------------------------------------------------------------
# survival table: 891 passengers, outcome driven by sex and class with
# age / fare / family effects inside each (class, sex) cell
# ---------------------------------------------------------------------------

# (pclass, sex, cell size, survivors in cell); first-class men precede the
# women so that the embarkation pool, which is two entries short for that
# class, runs dry on a female record (the blanks belong to two women)
CELLS = [
    (1, "male", 122, 45),
    (1, "female", 94, 91),
    (2, "female", 76, 70),
    (2, "male", 108, 17),
    (3, "female", 144, 72),
    (3, "male", 347, 47),
]

AGE_MEAN = {1: 38.2, 2: 29.9, 3: 25.1}
AGE_STD = {1: 14.8, 2: 14.0, 3: 12.5}
MISSING_AGES = {1: 30, 2: 11, 3: 136}

# lognormal fare parameters per class, giving means near 84 / 21 / 14
FARE_MU = {1: 4.10, 2: 2.90, 3: 2.45}
FARE_SIGMA = {1: 0.80, 2: 0.50, 3: 0.60}

SIBSP_LEVELS = np.array([0, 1, 2, 3, 4, 5, 8])
SIBSP_COUNTS = np.array([608, 209, 28, 16, 18, 5, 7])
PARCH_LEVELS = np.array([0, 1, 2, 3, 4, 5, 6])
PARCH_COUNTS = np.array([678, 118, 80, 5, 4, 5, 1])

EMBARKED_BY_CLASS = {
    1: {"C": 85, "Q": 2, "S": 127},   # plus 2 recorded blank below
    2: {"C": 17, "Q": 3, "S": 164},
    3: {"C": 66, "Q": 72, "S": 353},
}

SURNAMES = [
    "Halloway", "Brennan", "Ostrander", "Quill", "Farnsworth", "Ives",
    "Mercer", "Delacroix", "Tanaka", "Lindqvist", "Okafor", "Reyes",
    "Marchetti", "Svensson", "Dubois", "Keating", "Ashford", "Novak",
    "Petrov", "Calloway", "Brandt", "Whitfield", "Soriano", "Juhasz",
]
FEMALE_GIVEN = ["Margaret", "Eleanor", "Ada", "Ingrid", "Cecile", "Rosa",
                "Harriet", "Maud", "Vera", "Lucille", "Edith", "Sylvia"]
MALE_GIVEN = ["Albert", "Hugh", "Casper", "Emil", "Rupert", "Silas",
              "Victor", "Edmund", "Lars", "Oscar", "Felix", "Gregor"]

# survival-pressure coefficients inside a (class, sex) cell; the age terms
# are strong on purpose, so that age matters to the models through the
# interaction with sex while its marginal group difference stays small
CHILD_BONUS = {"male": 2.0, "female": 0.8}
ELDER_PENALTY = {"male": 0.55, "female": 0.35}
FARE_PULL = {"male": 0.45, "female": 0.40}
FAMILY_PENALTY = {"male": 0.5, "female": 0.9}


def _sample_counts(rng, levels, counts, size):
    """`size` draws matching a fixed level histogram as closely as possible."""
    pool = np.repeat(levels, counts)
    return rng.permutation(pool)[:size] if size <= pool.size else rng.choice(
        levels, size=size, p=counts / counts.sum())


def _format_age(age):
    if age < 2.0:
        return f"{age:.2f}"
    return str(int(round(age)))


def generate_titanic(seed=42):
    rng = np.random.default_rng(seed)
    n_total = sum(c[2] for c in CELLS)

    sibsp_all = _sample_counts(rng, SIBSP_LEVELS, SIBSP_COUNTS, n_total)
    parch_all = _sample_counts(rng, PARCH_LEVELS, PARCH_COUNTS, n_total)

    embarked_pool = {
        pcl: rng.permutation(np.repeat(list(counts), list(counts.values())))
        for pcl, counts in EMBARKED_BY_CLASS.items()
    }
    embarked_used = {1: 0, 2: 0, 3: 0}

    rows = []
    cursor = 0
    for pclass, sex, size, n_survivors in CELLS:
        age = np.clip(rng.normal(AGE_MEAN[pclass], AGE_STD[pclass], size), 0.42, 80.0)
        fare = np.round(
            np.clip(rng.lognormal(FARE_MU[pclass], FARE_SIGMA[pclass], size), 4.0, 512.0),
            2,
        )
        sibsp = sibsp_all[cursor : cursor + size]
        parch = parch_all[cursor : cursor + size]
        cursor += size

        log_fare = np.log(fare)
        score = (
            CHILD_BONUS[sex] * np.maximum(0.0, 16.0 - age) / 16.0
            - ELDER_PENALTY[sex] * np.maximum(0.0, age - 40.0) / 40.0
            + FARE_PULL[sex] * (log_fare - log_fare.mean())
            - FAMILY_PENALTY[sex] * np.maximum(0, sibsp - 2)
        )
        weights = np.exp(score - score.max())
        survivors = rng.choice(size, size=n_survivors, replace=False,
                               p=weights / weights.sum())
        survived = np.zeros(size, dtype=int)
        survived[survivors] = 1

        start = embarked_used[pclass]
        embarked = list(embarked_pool[pclass][start : start + size])
        embarked_used[pclass] += size
        # the two blank records belong to first-class women
        while len(embarked) < size:
            embarked.append("")

        for i in range(size):
            given = rng.choice(FEMALE_GIVEN if sex == "female" else MALE_GIVEN)
            title = "Miss." if sex == "female" and age[i] < 25 else (
                "Mrs." if sex == "female" else ("Master." if age[i] < 14 else "Mr."))
            name = f"{rng.choice(SURNAMES)}, {title} {given}"
            rows.append({
                "Survived": survived[i],
                "Pclass": pclass,
                "Name": name,
                "Sex": sex,
                "Age": age[i],
                "SibSp": int(sibsp[i]),
                "Parch": int(parch[i]),
                "Fare": fare[i],
                "Embarked": embarked[i],
            })

    rows = [rows[i] for i in rng.permutation(len(rows))]

    # blank out ages per class after survival is decided, so missingness
    # carries no outcome signal
    by_class = {1: [], 2: [], 3: []}
    for i, row in enumerate(rows):
        by_class[row["Pclass"]].append(i)
    missing_age = set()
    for pclass, count in MISSING_AGES.items():
        idx = rng.choice(len(by_class[pclass]), size=count, replace=False)
        missing_age.update(by_class[pclass][i] for i in idx)

    path = OUT_DIR / "titanic.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["PassengerId", "Survived", "Pclass", "Name", "Sex",
                         "Age", "SibSp", "Parch", "Fare", "Embarked"])
        for i, row in enumerate(rows):
            writer.writerow([
                i + 1,
                row["Survived"],
                row["Pclass"],
                row["Name"],
                row["Sex"],
                "" if i in missing_age else _format_age(row["Age"]),
                row["SibSp"],
                row["Parch"],
                f"{row['Fare']:.2f}",
                row["Embarked"],
            ])
    return path


# ---------------------------------------------------------------------------
# diabetes table: 768 patients, per-class Gaussian copula over eight
# measurements with published group means, spreads, and cross-correlations
# ---------------------------------------------------------------------------

PIMA_FEATURES = ["Pregnancies", "Glucose", "BloodPressure", "SkinThickness",
                 "Insulin", "BMI", "DiabetesPedigreeFunction", "Age"]

PIMA_NEG_MEAN = np.array([3.30, 109.98, 68.18, 19.66, 68.79, 30.30, 0.430, 31.19])
PIMA_NEG_STD = np.array([3.02, 26.14, 18.06, 14.89, 98.87, 7.69, 0.299, 11.67])
PIMA_POS_MEAN = np.array([4.87, 141.26, 70.82, 22.16, 100.34, 35.14, 0.551, 37.07])
PIMA_POS_STD = np.array([3.74, 31.94, 21.49, 17.68, 118.0, 7.26, 0.372, 10.97])

#: How far the positive-class means sit from the negative-class means,
#: as a fraction of the published gap. Tuned so a depth-limited tree and
#: a small network land near their reference test accuracies.
PIMA_SEPARATION = 1.0

#: Rows per class whose labels are swapped pairwise after sampling. Keeps
#: the class counts exact while denting achievable accuracy a little.
PIMA_LABEL_SWAPS = 8

PIMA_CORR_PAIRS = [
    (0, 7, 0.40), (1, 4, 0.35), (3, 5, 0.40), (3, 4, 0.40), (2, 7, 0.25),
    (2, 5, 0.25), (1, 7, 0.15), (1, 5, 0.15), (0, 2, 0.15), (4, 5, 0.15),
]


def _correlation_matrix():
    corr = np.eye(8)
    for i, j, r in PIMA_CORR_PAIRS:
        corr[i, j] = corr[j, i] = r
    # shrink toward identity until positive definite
    for _ in range(20):
        try:
            np.linalg.cholesky(corr)
            return corr
        except np.linalg.LinAlgError:
            corr = 0.9 * corr + 0.1 * np.eye(8)
    raise RuntimeError("correlation matrix cannot be made positive definite")


def _pima_class(rng, n, mean, std):
    chol = np.linalg.cholesky(_correlation_matrix())
    z = rng.standard_normal((n, 8)) @ chol.T
    x = mean + std * z
    # pedigree is right-skewed; rebuild it from its copula draw
    m, s = mean[6], std[6]
    sigma2 = np.log(1.0 + (s / m) ** 2)
    x[:, 6] = np.exp(np.log(m) - sigma2 / 2.0 + np.sqrt(sigma2) * z[:, 6])
    return x


def generate_pima(seed=115):
    rng = np.random.default_rng(seed)
    pos_mean = PIMA_NEG_MEAN + PIMA_SEPARATION * (PIMA_POS_MEAN - PIMA_NEG_MEAN)
    neg = _pima_class(rng, 500, PIMA_NEG_MEAN, PIMA_NEG_STD)
    pos = _pima_class(rng, 268, pos_mean, PIMA_POS_STD)
    X = np.vstack([neg, pos])
    y = np.concatenate([np.zeros(500, dtype=int), np.ones(268, dtype=int)])
    flip_neg = rng.choice(500, size=PIMA_LABEL_SWAPS, replace=False)
    flip_pos = 500 + rng.choice(268, size=PIMA_LABEL_SWAPS, replace=False)
    y[flip_neg], y[flip_pos] = 1, 0
    order = rng.permutation(768)
    X, y = X[order], y[order]

    def col(j, lo, hi, decimals):
        v = np.clip(X[:, j], lo, hi)
        return np.round(v, decimals) if decimals else np.round(v).astype(int)

    out = {
        "Pregnancies": col(0, 0, 17, 0),
        "Glucose": col(1, 44, 199, 0),
        "BloodPressure": col(2, 24, 122, 0),
        "SkinThickness": col(3, 0, 99, 0),
        "Insulin": col(4, 0, 846, 0),
        "BMI": col(5, 15.0, 67.1, 1),
        "DiabetesPedigreeFunction": col(6, 0.078, 2.42, 3),
        "Age": col(7, 21, 81, 0),
    }

    path = OUT_DIR / "pima.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(PIMA_FEATURES + ["Outcome"])
        for i in range(768):
            writer.writerow([out[f][i] for f in PIMA_FEATURES] + [y[i]])
    return path


if __name__ == "__main__":
    for path in (generate_titanic(), generate_pima()):
        print(f"wrote {path}")
