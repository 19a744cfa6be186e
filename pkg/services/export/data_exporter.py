import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from constants.Constants import CSV_FLOAT_FORMAT, OUTPUT_FORMATS
from exceptions.wse_exceptions import ExportException, ValidationException
from utils.debug_utils import DebugUtils

# Type aliases
Rows = List[Dict[str, Any]]
ConfigEcho = Dict[str, Any]

class DataExporter:
    """Class for writing reproducible CSV and JSON artifacts."""

    @staticmethod
    def config_comment_lines(config: ConfigEcho) -> List[str]:
        """Config echo as '# key=value' lines in sorted key order."""
        return [f"# {key}={config[key]}" for key in sorted(config)]

    @staticmethod
    def rows_to_csv(rows: Rows, columns: Sequence[str], config: Optional[ConfigEcho] = None) -> str:
        """
        Render rows as CSV text.

        Args:
            rows: One dict per row
            columns: Header, in output order
            config: Run configuration echoed as leading comment lines

        Returns:
            CSV text with 6 significant digits and LF line endings
        """
        frame = pd.DataFrame(rows, columns=list(columns))
        body = frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        header = "".join(line + "\n" for line in DataExporter.config_comment_lines(config or {}))
        return header + body

    @staticmethod
    def document_to_json(document: Dict[str, Any]) -> str:
        return json.dumps(document, sort_keys=True, indent=2, default=DataExporter._json_default) + "\n"

    @staticmethod
    def _json_default(value: Any) -> Any:
        if hasattr(value, "to_dict"):
            return value.to_dict()
        if hasattr(value, "item"):
            return value.item()
        return str(value)

    @staticmethod
    def render(rows: Rows, columns: Sequence[str], config: ConfigEcho, output_format: str) -> str:
        """CSV text or a {"config", "rows"} JSON document."""
        if output_format not in OUTPUT_FORMATS:
            raise ValidationException(f"format must be one of {OUTPUT_FORMATS}, got {output_format!r}")
        if output_format == "csv":
            return DataExporter.rows_to_csv(rows, columns, config)
        return DataExporter.document_to_json({"config": config, "rows": rows})

    @staticmethod
    def write_text(text: str, out_path: Optional[str] = None) -> Optional[Path]:
        """
        Write an artifact to a file, or to stdout when no path is given.

        Raises:
            ExportException: If the file cannot be written
        """
        if out_path is None:
            sys.stdout.write(text)
            return None
        try:
            path = Path(out_path)
            if path.parent != Path(""):
                path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        except OSError as e:
            raise ExportException(f"Error writing {out_path}: {str(e)}")
        DebugUtils.info(f"Successfully exported data to {path}")
        return path
