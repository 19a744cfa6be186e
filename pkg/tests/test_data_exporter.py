import json

import pytest

from constants.Constants import BOUNDS_COLUMNS, CHSH_QUANTUM_MAX
from exceptions.wse_exceptions import ExportException, ValidationException
from services.export.data_exporter import DataExporter
from utils.file_utils import FileUtils

CONFIG = {"seed": 7, "command": "bounds", "format": "csv"}
ROWS = [{"beta": 2.0, "f_beta": 0.0}, {"beta": CHSH_QUANTUM_MAX, "f_beta": 0.22844669}]

class TestCsv:

    def test_config_echo_then_header(self):
        lines = DataExporter.rows_to_csv(ROWS, BOUNDS_COLUMNS, CONFIG).split("\n")
        assert lines[:3] == ["# command=bounds", "# format=csv", "# seed=7"]
        assert lines[3] == "beta,f_beta"
        assert lines[5] == "2.82843,0.228447"
        assert lines[-1] == ""

    def test_column_order_follows_header(self):
        text = DataExporter.rows_to_csv([{"f_beta": 1.0, "beta": 2.5, "extra": 3}], BOUNDS_COLUMNS)
        assert text == "beta,f_beta\n2.5,1\n"

    def test_no_carriage_returns(self):
        assert "\r" not in DataExporter.rows_to_csv(ROWS, BOUNDS_COLUMNS, CONFIG)

class TestJson:

    def test_document_layout(self):
        document = json.loads(DataExporter.render(ROWS, BOUNDS_COLUMNS, CONFIG, "json"))
        assert document["config"] == CONFIG
        assert document["rows"][1]["beta"] == CHSH_QUANTUM_MAX

    def test_sorted_keys_and_trailing_newline(self):
        text = DataExporter.document_to_json({"b": 1, "a": {"d": 2, "c": 3}})
        assert text.endswith("}\n")
        assert text.index('"a"') < text.index('"b"') and text.index('"c"') < text.index('"d"')

    def test_unknown_format(self):
        with pytest.raises(ValidationException):
            DataExporter.render(ROWS, BOUNDS_COLUMNS, CONFIG, "xml")

class TestWriting:

    def test_stdout_when_no_path(self, capsys):
        assert DataExporter.write_text("a,b\n") is None
        assert capsys.readouterr().out == "a,b\n"

    def test_creates_parent_directories(self, tmp_path):
        target = tmp_path / "nested" / "out.csv"
        DataExporter.write_text("x\n", str(target))
        assert target.read_bytes() == b"x\n"

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(ExportException):
            DataExporter.write_text("x\n", str(tmp_path))

class TestFileUtils:

    def test_missing_json_is_none(self, tmp_path):
        assert FileUtils.load_json(str(tmp_path / "absent.json")) is None

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ValidationException):
            FileUtils.load_json(str(path))

    def test_output_directory(self, tmp_path):
        utils = FileUtils(str(tmp_path / "artifacts"))
        path = utils.save_json({"b": 1, "a": 2}, "doc.json")
        assert utils.get_output_directory().is_dir()
        assert path.read_text() == '{\n  "a": 2,\n  "b": 1\n}\n'

    def test_missing_setup_file(self, tmp_path):
        with pytest.raises(ValidationException):
            FileUtils.load_setup(str(tmp_path / "absent.json"))
