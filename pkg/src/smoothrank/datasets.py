"""Bundled public survival datasets for the golden-file experiments.

The CSVs under ``smoothrank/data/`` are numeric exports of three classic
public survival studies (the Mayo primary biliary cirrhosis trial, the
adjuvant-chemotherapy colon cancer trial, and the NCCTG advanced lung
cancer study), prepared as follows:

* pbc.csv - 418 records, 17 features; event = death (transplant and
  end-of-study are censored); sex encoded f=1, m=0.
* colon_death.csv / colon_recurrence.csv - 929 records, 11 features,
  one file per outcome type; rx encoded Obs=1, Lev=2, Lev+5FU=3.
* lung.csv - 228 records, 7 features; event = death; the institution
  code is not a clinical feature and is excluded.

Missing cells carry the token "NA". Columns are ``time,event,<features>``
so every file loads with plain load_csv.
"""

from importlib import resources

from .data import load_csv


def _bundled(name):
    return resources.files(__package__) / "data" / name


def dataset_path(name):
    """Filesystem path of a bundled CSV (pbc, colon_death,
    colon_recurrence, lung)."""
    path = _bundled(f"{name}.csv")
    if not path.is_file():
        raise ValueError(f"no bundled dataset named {name!r}")
    return path


def load_pbc():
    """Mayo primary biliary cirrhosis trial: 418 records, 17 features."""
    return load_csv(dataset_path("pbc"), time_col="time", event_col="event")


def load_colon(outcome="death"):
    """Adjuvant colon cancer trial: 929 records, 11 features.

    outcome selects which of the study's two recorded endpoints to model:
    "death" or "recurrence".
    """
    if outcome not in ("death", "recurrence"):
        raise ValueError('outcome must be "death" or "recurrence"')
    return load_csv(dataset_path(f"colon_{outcome}"), time_col="time", event_col="event")


def load_lung():
    """NCCTG advanced lung cancer study: 228 records, 7 features."""
    return load_csv(dataset_path("lung"), time_col="time", event_col="event")
