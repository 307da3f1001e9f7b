"""Grade website legal policies from their text."""

import json

from ._core import (
    PolicyGradeError,
    __version__,
    clean_text,
    count_words,
    embed,
    evaluate,
    letter_grade,
    pca2,
    plan_budget,
    site_score,
    split_indices,
    summarize,
    train,
)
from ._core import Model as _Model


class Model(_Model):
    """A trained model artifact loaded from disk."""

    @property
    def metadata(self):
        return json.loads(self._metadata_json)

    def analyze(self, request):
        """Run an AnalyzeRequest (dict) and return the SiteReport as a dict."""
        return json.loads(self._analyze_json(json.dumps(request)))


__all__ = [
    "Model",
    "PolicyGradeError",
    "__version__",
    "clean_text",
    "count_words",
    "embed",
    "evaluate",
    "letter_grade",
    "pca2",
    "plan_budget",
    "site_score",
    "split_indices",
    "summarize",
    "train",
]
