import json
import logging
import math

import pytest

from geowl.config.logging_config import (
    ContextFilter,
    JsonFormatter,
    LogEntry,
    current_run_id,
    log_function_call,
    new_run_id,
)
from geowl.config.settings import DEFAULT_EPS_GRID, RunConfig, default_threads, load_run_config
from geowl.errors import ConfigError


class TestRunConfig:
    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("GEOWL_THREADS", raising=False)
        config = load_run_config()
        assert config.n_in == 5 and config.n_out == 1
        assert math.isinf(config.r_sub) and math.isinf(config.r_cutoff)
        assert config.decimals == 9
        assert config.eps == 1e-6
        assert config.eps_grid == DEFAULT_EPS_GRID
        assert config.threads == 1
        assert not config.pin_timestamp

    def test_threads_from_environment(self, monkeypatch):
        monkeypatch.setenv("GEOWL_THREADS", "4")
        assert default_threads() == 4
        monkeypatch.setenv("GEOWL_THREADS", "many")
        assert default_threads() == 1

    def test_config_file(self, tmp_path):
        path = tmp_path / "run.env"
        path.write_text("# 有限半径\nR_SUB=2.5\nr_cutoff=inf\nEPS_GRID=0.1,0.001\nDECIMALS=4\n", encoding="utf-8")
        config = load_run_config(str(path))
        assert config.r_sub == 2.5
        assert math.isinf(config.r_cutoff)
        assert config.eps_grid == [0.001, 0.1]
        assert config.quantizer.decimals == 4

    def test_cli_overrides_file(self, tmp_path):
        path = tmp_path / "run.env"
        path.write_text("DECIMALS=4\nN_IN=3\n", encoding="utf-8")
        config = load_run_config(str(path), {"decimals": 2, "n_in": None})
        assert config.decimals == 2
        assert config.n_in == 3

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "run.env"
        path.write_text("COLOR_BUDGET=3\n", encoding="utf-8")
        with pytest.raises(ConfigError) as excinfo:
            load_run_config(str(path))
        assert excinfo.value.details["errors"][0]["field"] == "color_budget"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_run_config(str(tmp_path / "absent.env"))

    @pytest.mark.parametrize(
        "overrides",
        [{"decimals": 13}, {"eps": 0}, {"n_out": -1}, {"eps_grid": "0.1,-1"}, {"r_sub": "wide"}],
    )
    def test_invalid_values(self, overrides):
        with pytest.raises(ConfigError):
            load_run_config(None, overrides)

    def test_refine_config(self):
        refine_cfg = RunConfig(r_sub=1.5, threads=2, decimals=3).to_refine_config()
        assert refine_cfg.r_sub == 1.5
        assert refine_cfg.threads == 2
        assert refine_cfg.quantizer.decimals == 3

    def test_report_is_json_safe(self):
        report = RunConfig().to_report()
        assert report["r_sub"] == "inf"
        json.dumps(report)


class TestLogging:
    def _record(self, **extra):
        record = logging.LogRecord("geowl.test", logging.INFO, __file__, 10, "扫描完成", (), None)
        for key, value in extra.items():
            setattr(record, key, value)
        return record

    def test_entry_collects_context(self):
        entry = LogEntry.from_record(self._record(extra_fields={"n": 8}, command="scan"))
        assert entry.context == {"n": 8, "command": "scan"}
        assert entry.to_text().endswith('context={"command": "scan", "n": 8}')

    def test_json_formatter(self):
        payload = json.loads(JsonFormatter().format(self._record(extra_fields={"eps": 0.1})))
        assert payload["message"] == "扫描完成"
        assert payload["context"] == {"eps": 0.1}

    def test_function_call_reraises(self):
        @log_function_call()
        def explode():
            raise ConfigError("坏配置")

        with pytest.raises(ConfigError):
            explode()

    def test_filter_injects_run_id(self):
        run_id = new_run_id()
        record = self._record()
        assert ContextFilter().filter(record)
        assert record.run_id == run_id == current_run_id()
        assert LogEntry.from_record(record).context == {"run_id": run_id}

    def test_filter_keeps_explicit_run_id(self):
        new_run_id()
        record = self._record(run_id="fixed")
        ContextFilter().filter(record)
        assert record.run_id == "fixed"

    def test_run_ids_differ(self):
        assert new_run_id() != new_run_id()
