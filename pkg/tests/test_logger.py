"""Tests for structured logging."""

import json
import logging
import sys

from src.utils.logger import JSONFormatter


class TestJSONFormatter:
    def test_extra_fields(self):
        """Identity, status and timing extras land in the JSON entry."""
        record = logging.LogRecord("src.registry", logging.INFO, __file__, 1, "qbinom: pass", None, None)
        record.identity = "qbinom"
        record.status = "pass"
        record.elapsed = 0.25
        entry = json.loads(JSONFormatter().format(record))
        assert entry["level"] == "INFO"
        assert entry["logger"] == "src.registry"
        assert entry["message"] == "qbinom: pass"
        assert entry["identity"] == "qbinom"
        assert entry["elapsed"] == 0.25
        assert "terms" not in entry

    def test_exception(self):
        try:
            raise ValueError("boom")
        except ValueError:
            record = logging.LogRecord("x", logging.ERROR, __file__, 1, "failed", None, sys.exc_info())
        entry = json.loads(JSONFormatter().format(record))
        assert "ValueError: boom" in entry["exception"]
