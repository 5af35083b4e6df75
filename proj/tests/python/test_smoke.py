import pytest

heegner_index = pytest.importorskip("heegner_index")


def test_nu():
    assert heegner_index.nu(359) == 2
    assert heegner_index.nu(90001) == 87


def test_class_number():
    assert heegner_index.class_number(-23) == 3
    with pytest.raises(ValueError):
        heegner_index.class_number(-5)


def test_an():
    assert heegner_index.an("37a1", 10) == [1, -2, -3, 2, -2, 6, -1, 0, 6, 4]


def test_weight():
    assert heegner_index.weight(-3, 37) == 3
    assert heegner_index.weight(-4, 37) == 2
    assert heegner_index.weight(-7, 37) == 1


def test_trace():
    t = heegner_index.trace("37a1", -4, 12)
    assert t["recognized"]
    assert t["index"] == 1


def test_survey():
    text = "37a1 0 0 1 -1 0 37 1 (0:0:1) 1 1\n11a1 0 -1 1 -10 -20 11 0 - 5 1\n"
    report = heegner_index.survey(text, dmax=40)
    assert report["skipped"] == 1
    [row] = report["rows"]
    assert row["label"] == "37a1"
    assert row["I_E"] == 1
    assert row["verdict"] == "vacuous"
    assert report["exit_code"] == 0
