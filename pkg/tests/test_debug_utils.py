import io
import logging

import pytest

from exceptions.wse_exceptions import ValidationException
from utils.debug_utils import DebugUtils

@pytest.fixture
def log_stream():
    handler = next(h for h in DebugUtils.get_logger().handlers if isinstance(h, logging.StreamHandler))
    stream = io.StringIO()
    previous = handler.setStream(stream)
    yield stream
    handler.setStream(previous)
    DebugUtils.set_debug_mode(False)

class TestDebugUtils:

    def test_single_named_logger(self):
        logger = DebugUtils.get_logger()
        assert DebugUtils() is DebugUtils()
        assert logger.name == "WseDi"
        assert not logger.propagate

    def test_debug_mode_toggles_level(self, log_stream):
        DebugUtils.set_debug_mode(True)
        assert DebugUtils.get_logger().level == logging.DEBUG
        DebugUtils.debug("sampling", 3)
        DebugUtils.set_debug_mode(False)
        DebugUtils.debug("hidden")
        text = log_stream.getvalue()
        assert "DEBUG - sampling 3" in text
        assert "hidden" not in text

    def test_log_error_format(self, log_stream):
        DebugUtils.log_error(ValidationException("gamma out of range"), "simulate")
        assert "ERROR - simulate: ValidationException: gamma out of range" in log_stream.getvalue()
