# src/core/config_loader.py

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Type

from jsonschema import ValidationError, validate

from src.core.constants import SystemPaths
from src.core.errors import ConfigurationError, ExtractionError
from src.core.structure import PipelineConfig

logger = logging.getLogger("Extractor.Config")


class ConfigLoader:
    """
    Hydrates a PipelineConfig from the mounted defaults file.
    Responsibility: schema validation, strict key access, CLI overrides.
    """

    @staticmethod
    def validate_integrity(data: Any, schema_filename: str,
                           error: Type[ExtractionError] = ConfigurationError) -> None:
        """Hard-halts with `error` if the JSON document does not match its schema."""
        schema_path = SystemPaths.SCHEMA_DIR / schema_filename
        try:
            schema = json.loads(schema_path.read_text(encoding="utf-8"))
            validate(instance=data, schema=schema)
        except ValidationError as e:
            logger.critical(f"❌ SCHEMA BREACH: {schema_filename} validation failed.")
            raise error(f"{schema_filename} rejected the document: {e.message}",
                        path=list(e.absolute_path)) from e
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"schema {schema_filename} unreadable: {e}") from e

    @staticmethod
    def read(config_path: Optional[Path] = None) -> Dict[str, Any]:
        path = Path(config_path) if config_path else SystemPaths.CONFIG_DIR / SystemPaths.PIPELINE_DEFAULTS
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"configuration {path} unreadable: {e}") from e
        ConfigLoader.validate_integrity(data, SystemPaths.PIPELINE_CONFIG_SCHEMA)
        return data

    @staticmethod
    def load(gamma: float, config_path: Optional[Path] = None,
             **overrides: Any) -> PipelineConfig:
        """
        File values first, then every override that is not None.
        No .get() defaults: a key missing from a validated file is a schema bug.
        """
        data = ConfigLoader.read(config_path)
        values = {
            "eps": data["eps"],
            "d": data["d"],
            "delta": data["delta"],
            "s": data["triangulation_order"],
            "seed": data["seed"],
            "embed_restarts": data["embed_restarts"],
            "max_recursion_depth": data["max_recursion_depth"],
            "max_clusters": data["max_clusters"],
            "regularity_restarts": data["regularity_restarts"],
            "similarity_threshold": data["similarity_threshold"],
            "waive_size_check": data["waive_size_check"],
            "waive_degree_check": data["waive_degree_check"],
            "allow_low_degree": data["allow_low_degree"],
        }
        for key, value in overrides.items():
            if key not in values:
                raise ConfigurationError(f"unknown override '{key}'")
            if value is not None:
                values[key] = value
        try:
            config = PipelineConfig.from_gamma(gamma, **values)
        except ValueError as e:
            raise ConfigurationError(str(e)) from e
        logger.info(f"✅ Configuration hydrated: gamma={gamma}, k={config.k}, "
                    f"eps={config.params.eps}, d={config.params.d}, seed={config.seed}")
        return config
