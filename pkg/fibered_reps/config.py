"""
Конфигурация вычислений: точность, пороги, вывод и метрики
"""

import copy
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
OUTPUT_FORMATS = ("text", "machine")


class ConfigManager:

    def __init__(self, config_file: Optional[str] = None):
        if config_file:
            self.config_path = Path(config_file)
        else:
            config_dir = Path(__file__).parent / "configs"
            self.config_path = config_dir / "module_config.json"

        self.default_module_settings = {
            "log_level": "INFO",
            "precision": 50,
            "refinement_rounds": 6,
            "burnside_tolerance": 1e-8,
            "burnside_band": 1000.0,
            "max_factor_degree": 8,
            "output_format": "text",
            "metrics": {
                "enabled": True,
                "namespace": "fibered_reps",
                "textfile": "",
            },
        }

        self.config_data: Dict[str, Any] = {}
        self.load_config()

    def load_config(self) -> bool:
        try:
            if not self.config_path.exists():
                logger.warning(f"Config file not found: {self.config_path}")
                self.create_default_config()
                return True

            with open(self.config_path, 'r', encoding='utf-8') as f:
                self.config_data = json.load(f)

            if not isinstance(self.config_data, dict):
                raise ValueError("top level of the config file must be an object")
            settings = self.config_data.setdefault('module_settings', {})

            for key, value in self.default_module_settings.items():
                if key not in settings:
                    settings[key] = copy.deepcopy(value)
                elif isinstance(value, dict) and isinstance(settings[key], dict):
                    for sub_key, sub_value in value.items():
                        settings[key].setdefault(sub_key, sub_value)

            logger.debug(f"Configuration loaded from {self.config_path}")
            return True

        except json.JSONDecodeError as e:
            logger.error(f"Invalid JSON in config file: {e}")
            self.config_data = {'module_settings': copy.deepcopy(self.default_module_settings)}
            return False
        except (OSError, ValueError) as e:
            logger.error(f"Error loading config: {e}")
            self.config_data = {'module_settings': copy.deepcopy(self.default_module_settings)}
            return False

    def create_default_config(self) -> None:
        self.config_data = {'module_settings': copy.deepcopy(self.default_module_settings)}
        self.save_config()
        logger.info("Default configuration created")

    def save_config(self) -> bool:
        try:
            self.config_path.parent.mkdir(exist_ok=True, parents=True)
            with open(self.config_path, 'w', encoding='utf-8') as f:
                json.dump(self.config_data, f, indent=2, ensure_ascii=False)
            logger.debug(f"Configuration saved to {self.config_path}")
            return True
        except OSError as e:
            logger.error(f"Error saving config: {e}")
            return False

    def get_module_setting(self, key: str, default: Any = None) -> Any:
        return self.config_data.get('module_settings', {}).get(key, default)

    def set_module_setting(self, key: str, value: Any) -> None:
        self.config_data.setdefault('module_settings', {})[key] = value
        self.save_config()

    def get_metrics_config(self) -> Dict[str, Any]:
        return self.get_module_setting('metrics', {})

    def get_config_summary(self) -> Dict[str, Any]:
        return {
            'config_file': str(self.config_path.absolute()),
            'precision': self.get_module_setting('precision'),
            'output_format': self.get_module_setting('output_format'),
            'metrics_enabled': self.get_metrics_config().get('enabled', False),
        }

    def validate_config(self) -> Dict[str, Any]:
        errors = []
        warnings = []

        level = self.get_module_setting('log_level')
        if str(level).upper() not in LOG_LEVELS:
            errors.append(f"Unknown log_level: {level}")

        for key in ('precision', 'refinement_rounds', 'max_factor_degree'):
            value = self.get_module_setting(key)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                errors.append(f"{key} must be a positive integer, got {value!r}")

        precision = self.get_module_setting('precision')
        if isinstance(precision, int) and 1 <= precision < 15:
            warnings.append(f"precision {precision} is below double precision")

        tolerance = self.get_module_setting('burnside_tolerance')
        if not isinstance(tolerance, (int, float)) or not 0 < tolerance < 1:
            errors.append(f"burnside_tolerance must lie in (0, 1), got {tolerance!r}")

        band = self.get_module_setting('burnside_band')
        if not isinstance(band, (int, float)) or band <= 1:
            errors.append(f"burnside_band must be greater than 1, got {band!r}")

        if self.get_module_setting('output_format') not in OUTPUT_FORMATS:
            errors.append(f"output_format must be one of {', '.join(OUTPUT_FORMATS)}")

        metrics = self.get_metrics_config()
        if metrics.get('enabled') and not metrics.get('namespace'):
            warnings.append("metrics enabled without a namespace")

        return {
            'valid': len(errors) == 0,
            'errors': errors,
            'warnings': warnings,
            'has_warnings': len(warnings) > 0,
        }


class AnalysisConfig:

    _config_manager: Optional[ConfigManager] = None
    _env_loaded = False

    @classmethod
    def _get_config_manager(cls) -> ConfigManager:
        if not cls._env_loaded:
            load_dotenv()
            cls._env_loaded = True
        if cls._config_manager is None:
            cls._config_manager = ConfigManager()
        return cls._config_manager

    @classmethod
    def use_config_file(cls, path: Optional[str]) -> ConfigManager:
        cls._config_manager = ConfigManager(path) if path else None
        return cls._get_config_manager()

    @classmethod
    def get_module_setting(cls, key: str, default: Any = None) -> Any:
        return cls._get_config_manager().get_module_setting(key, default)

    @classmethod
    def get_log_level(cls) -> str:
        level = os.getenv('FIBERED_REPS_LOG_LEVEL') or cls.get_module_setting('log_level', 'INFO')
        return str(level).upper()

    @classmethod
    def get_precision(cls) -> int:
        manager = cls._get_config_manager()
        env_value = os.getenv('FIBERED_REPS_PRECISION')
        if env_value:
            try:
                return int(env_value)
            except ValueError:
                logger.warning(f"Ignoring non-integer FIBERED_REPS_PRECISION={env_value!r}")
        return int(manager.get_module_setting('precision', 50))

    @classmethod
    def get_refinement_rounds(cls) -> int:
        return int(cls.get_module_setting('refinement_rounds', 6))

    @classmethod
    def get_burnside_tolerance(cls) -> float:
        return float(cls.get_module_setting('burnside_tolerance', 1e-8))

    @classmethod
    def get_burnside_band(cls) -> float:
        return float(cls.get_module_setting('burnside_band', 1000.0))

    @classmethod
    def get_max_factor_degree(cls) -> int:
        return int(cls.get_module_setting('max_factor_degree', 8))

    @classmethod
    def get_output_format(cls) -> str:
        return cls.get_module_setting('output_format', 'text')

    @classmethod
    def get_metrics_config(cls) -> Dict[str, Any]:
        return cls._get_config_manager().get_metrics_config()

    @classmethod
    def is_metrics_enabled(cls) -> bool:
        return bool(cls.get_metrics_config().get('enabled', False))

    @classmethod
    def get_metrics_file(cls) -> Optional[str]:
        return os.getenv('FIBERED_REPS_METRICS_FILE') or cls.get_metrics_config().get('textfile') or None

    @classmethod
    def validate_config(cls) -> Dict[str, Any]:
        return cls._get_config_manager().validate_config()
