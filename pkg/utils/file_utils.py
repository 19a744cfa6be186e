import json
from pathlib import Path
from typing import Any, Dict, Optional

from exceptions.wse_exceptions import ExportException, ValidationException
from models.device_setup import DeviceSetup
from models.distribution import JointDistribution
from models.protocol_data import Transcript

class FileUtils:
    """JSON documents for setups, distribution tables and transcripts."""

    def __init__(self, output_dir: str):
        self.output_dir = Path(output_dir)
        self.ensure_directory(self.output_dir)

    def get_output_directory(self) -> Path:
        """Get the output directory path."""
        return self.output_dir

    def save_json(self, data: dict, filename: str) -> Path:
        """Save data as a JSON file in the output directory."""
        file_path = self.output_dir / filename
        FileUtils.write_json(data, file_path)
        return file_path

    @staticmethod
    def ensure_directory(directory: Path) -> None:
        """Ensure directory exists."""
        directory.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def load_json(path: str) -> Optional[Dict[str, Any]]:
        """Load a JSON document; None when the file does not exist."""
        file_path = Path(path)
        if not file_path.exists():
            return None
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            raise ValidationException(f"{path} is not valid JSON: {e}")

    @staticmethod
    def write_json(data: Dict[str, Any], path: Path) -> None:
        try:
            with open(path, 'w', encoding='utf-8', newline='\n') as f:
                json.dump(data, f, indent=2, sort_keys=True)
                f.write('\n')
        except OSError as e:
            raise ExportException(f"Error writing {path}: {e}")

    @staticmethod
    def _require(path: str) -> Dict[str, Any]:
        data = FileUtils.load_json(path)
        if data is None:
            raise ValidationException(f"File not found: {path}")
        return data

    @staticmethod
    def load_setup(path: str) -> DeviceSetup:
        return DeviceSetup.from_dict(FileUtils._require(path))

    @staticmethod
    def save_setup(setup: DeviceSetup, path: str) -> None:
        FileUtils.write_json(setup.to_dict(), Path(path))

    @staticmethod
    def load_distribution(path: str) -> JointDistribution:
        return JointDistribution.from_dict(FileUtils._require(path))

    @staticmethod
    def save_distribution(distribution: JointDistribution, path: str) -> None:
        FileUtils.write_json(distribution.to_dict(), Path(path))

    @staticmethod
    def save_transcript(transcript: Transcript, path: str) -> None:
        """Transcript as JSON lines: one record per round, then the counter footer."""
        try:
            with open(path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(transcript.to_jsonl())
        except OSError as e:
            raise ExportException(f"Error writing {path}: {e}")

    @staticmethod
    def load_transcript(path: str) -> Transcript:
        file_path = Path(path)
        if not file_path.exists():
            raise ValidationException(f"File not found: {path}")
        with open(file_path, 'r', encoding='utf-8') as f:
            return Transcript.from_jsonl(f.read())
