import math
import os
import pathlib

import pytest

import policygrade as pg

DATA = pathlib.Path(os.environ.get("PG_DATA_DIR", pathlib.Path(__file__).resolve().parents[2] / "data"))
CORPUS = DATA / "mini_corpus.ndjson"


@pytest.fixture(scope="module")
def model(tmp_path_factory):
    path = tmp_path_factory.mktemp("model") / "mini.pgm"
    metrics = pg.train(str(CORPUS), str(path))
    assert metrics["accuracy"] >= 0.5
    return pg.Model(str(path))


def test_clean_text():
    assert pg.clean_text("<strong>Genetic Information.</strong>") == "genetic information."
    assert pg.clean_text("Café Rosé") == "cafe rose"


def test_budget_and_summary():
    assert pg.plan_budget(75) is None
    assert pg.plan_budget(76) == 50
    text = " ".join(f"w{i}" for i in range(450)) + "."
    assert pg.count_words(pg.summarize(text)) <= 200


def test_embed():
    v = pg.embed("we share your data")
    assert len(v) == 768
    assert math.isclose(math.sqrt(sum(x * x for x in v)), 1.0, rel_tol=1e-9)
    assert v == pg.embed("we share your data")
    with pytest.raises(pg.PolicyGradeError, match="EmptyText"):
        pg.embed("   ")


def test_score_and_grade():
    assert pg.site_score(10, 5, 3, 1) == 4
    assert pg.letter_grade(8, 10) == "A"
    assert pg.letter_grade(-5, 10) == "E"


def test_split():
    train, test = pg.split_indices(4160)
    assert (len(train), len(test)) == (3328, 832)
    assert sorted(train + test) == list(range(4160))


def test_pca():
    points, variance = pg.pca2([[0.0, 0.0, 0.0], [1.0, 1.0, 0.0], [2.0, 2.0, 0.0]])
    assert len(points) == 3
    assert math.isclose(variance[0], 2.0)


def test_model(model):
    assert model.kind == "knn"
    assert model.metadata["split"]["train_size"] == 32
    preds = model.predict(["We may sell your data to brokers.", "<br>"])
    assert preds[1] is None
    assert preds[0]["label"] in {"good", "neutral", "bad", "blocker"}
    assert math.isclose(sum(preds[0]["scores"].values()), 1.0)


def test_analyze(model):
    report = model.analyze({"documents": [{"paragraphs": ["You can delete your account.", "We sell your data."]}]})
    counts = report["counts"]
    assert sum(counts.values()) == len(report["items"]) == 2
    assert report["score"] == pg.site_score(counts["good"], counts["neutral"], counts["bad"], counts["blocker"])
    with pytest.raises(pg.PolicyGradeError, match="NoAnalyzableText"):
        model.analyze({"documents": [{"paragraphs": ["<p></p>"]}]})


def test_evaluate():
    rows = pg.evaluate(str(CORPUS))
    assert [r["model"] for r in rows] == ["knn", "gaussian_nb", "decision_tree"]
    for r in rows:
        assert abs(r["recall"] - r["accuracy"]) <= 1e-12
