from src.presentation.cli.config import Settings


def test_defaults():
    settings = Settings(_env_file=None)

    assert settings.n_values == [3, 4, 5]
    assert settings.resolution == 48


def test_n_values_from_comma_separated_env(monkeypatch):
    monkeypatch.setenv("SINEBODY_N_VALUES", "3,4")

    assert Settings(_env_file=None).n_values == [3, 4]


def test_n_values_from_json_env(monkeypatch):
    monkeypatch.setenv("SINEBODY_N_VALUES", "[3,5]")

    assert Settings(_env_file=None).n_values == [3, 5]


def test_single_dimension_env(monkeypatch):
    monkeypatch.setenv("SINEBODY_N_VALUES", "6")

    assert Settings(_env_file=None).n_values == [6]


def test_prefixed_scalar_env(monkeypatch):
    monkeypatch.setenv("SINEBODY_SAMPLES", "1000")

    settings = Settings(_env_file=None)

    assert settings.samples == 1000
