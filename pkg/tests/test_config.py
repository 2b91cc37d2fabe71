import pytest

from hfhe.config import ConfigError, load_config
from hfhe.strategies import Kind


def write(tmp_path, text):
    p = tmp_path / "run.ini"
    p.write_text(text)
    return p


def test_defaults(tmp_path):
    cfg = load_config(write(tmp_path, "[run]\ndataset = prices.csv\n"))
    assert cfg.dataset == tmp_path / "prices.csv"
    assert cfg.output == tmp_path / "out"
    assert (cfg.in_len, cfg.step, cfg.seed, cfg.drift) == (500, 20, 0, False)
    assert [s.kind for s in cfg.strategies] == [Kind.EW, Kind.MINV, Kind.MINMAD, Kind.PT, Kind.HFHE]
    hf = cfg.hfhe_template()
    assert (hf.lambda_plus, hf.lambda_minus, hf.solver, hf.starts) == (0.30, 0.69, "multistart", None)
    pt = cfg.strategies[3]
    assert (pt.alpha, pt.beta) == (0.88, 2.25)
    m = cfg.metrics
    assert (m.r_f, m.alpha, m.beta, m.delta_tau) == (0.0, 0.05, 0.05, 250)


def test_full(tmp_path):
    cfg = load_config(write(tmp_path, """
[run]
dataset = data/p.csv
strategies = HF/HE, EW
in_len = 100
step = 10
seed = 3
drift = yes
output = /tmp/elsewhere
[hfhe]
lambda_plus = 0.2
lambda_minus = 0.6
solver = milp
starts = 5
[metrics]
delta_tau = 50
[sweep]
lambda_plus = 0.15, 0.20, 0.25
lambda_minus = 0.30, 0.40, 0.66
"""))
    assert cfg.dataset == tmp_path / "data" / "p.csv"
    assert str(cfg.output) == "/tmp/elsewhere"
    assert cfg.strategies[0].label == "HF/HE 0.20-0.60" and cfg.strategies[0].starts == 5
    assert cfg.drift and cfg.metrics.delta_tau == 50
    assert cfg.sweep_plus == [0.15, 0.20, 0.25] and cfg.sweep_minus == [0.30, 0.40, 0.66]


@pytest.mark.parametrize("text, match", [
    ("[run]\ndataset = a.csv\ncolour = red\n", "unknown key"),
    ("[run]\ndataset = a.csv\n[extras]\nx = 1\n", "unknown section"),
    ("[run]\nstep = 5\n", "dataset is required"),
    ("[run]\ndataset = a.csv\nstrategies = EW, Magic\n", "unknown strategy"),
    ("[run]\ndataset = a.csv\nin_len = ten\n", "invalid literal"),
    ("[run]\ndataset = a.csv\nstrategies = PT\n[pt]\nalpha = 1.5\n", "alpha"),
    ("[run]\ndataset = a.csv\nstrategies = ,\n", "at least one strategy"),
    ("[run]\ndataset = a.csv\ndrift = maybe\n", "drift"),
    ("not an ini file\n", "cannot parse"),
])
def test_errors(tmp_path, text, match):
    with pytest.raises(ConfigError, match=match):
        load_config(write(tmp_path, text))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "nope.ini")


def test_readme_example(tmp_path):
    from pathlib import Path
    readme = (Path(__file__).parents[1] / "README.md").read_text()
    block = readme.split("```ini\n")[1].split("```")[0]
    cfg = load_config(write(tmp_path, block))
    assert len(cfg.strategies) == 5 and cfg.hfhe_template().starts is None
    assert cfg.in_len == 500 and cfg.sweep_minus == [0.30, 0.40, 0.66]
    assert cfg.metrics.delta_tau == 250 and not cfg.drift
