"""Logging system for the toolkit: console, files, performance and transcripts."""

import json
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

from loguru import logger
from loguru._logger import Logger

from ..utils.config import config


class IbbsLogger:
    """Configures loguru sinks and provides typed logging helpers."""

    def __init__(self):
        """Initialize the logger from the ``monitoring`` configuration section."""
        self.log_level = config.get("monitoring.log_level", "INFO")
        self.log_file = config.get("monitoring.log_file", "logs/ibbs.log")
        self.transcript_file = config.get("monitoring.transcript_file", "logs/transcript.log")

        Path(self.log_file).parent.mkdir(parents=True, exist_ok=True)
        Path(self.transcript_file).parent.mkdir(parents=True, exist_ok=True)

        self._configure_logger()

        self.performance_tracking = config.get("monitoring.performance_tracking", {}) or {}
        self.enabled = self.performance_tracking.get("enabled", True)

        self.counts: Dict[str, int] = {"frames": 0, "sessions": 0, "faults": 0, "security_events": 0}

        logger.debug("IbbsLogger initialized")

    def _configure_logger(self) -> None:
        """Configure loguru sinks."""
        logger.remove()

        # stdout carries CLI output; logs go to stderr
        logger.add(
            sys.stderr,
            level=self.log_level,
            format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
                   "<level>{level: <8}</level> | "
                   "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
                   "<level>{message}</level>",
            filter=lambda record: "TRANSCRIPT" not in record["extra"],
            colorize=True,
        )

        logger.add(
            self.log_file,
            level=self.log_level,
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} | {message}",
            filter=lambda record: "TRANSCRIPT" not in record["extra"],
            rotation="100 MB",
            retention="30 days",
            compression="zip",
            encoding="utf-8",
        )

        error_log_file = str(Path(self.log_file).parent / "errors.log")
        logger.add(
            error_log_file,
            level="ERROR",
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} | {message}",
            rotation="50 MB",
            retention="90 days",
            compression="zip",
            encoding="utf-8",
        )

        perf_log_file = str(Path(self.log_file).parent / "performance.log")
        logger.add(
            perf_log_file,
            level="INFO",
            format="{time:YYYY-MM-DD HH:mm:ss} | {message}",
            filter=lambda record: "PERFORMANCE" in record["extra"],
            rotation="50 MB",
            retention="7 days",
            encoding="utf-8",
        )

        # Line-delimited JSON, one frame per line
        logger.add(
            self.transcript_file,
            level="INFO",
            format="{message}",
            filter=lambda record: "TRANSCRIPT" in record["extra"],
            rotation="50 MB",
            retention="7 days",
            encoding="utf-8",
        )

    def log_session_event(self, session_id: str, role: str, event: str,
                          data: Optional[Dict[str, Any]] = None) -> None:
        """Log a session state change.

        Args:
            session_id: Session identifier
            role: Endpoint role
            event: Event name (attempt, accepted, rejected, ...)
            data: Non-secret event data
        """
        if event == "start":
            self.counts["sessions"] += 1
        logger.bind(
            log_type="session",
            session_id=session_id,
            role=role,
            event=event,
        ).info(f"Session {session_id} [{role}] {event} {json.dumps(data or {}, default=str)}")

    def log_frame(self, entry: Dict[str, Any]) -> None:
        """Write one transcript entry to the transcript sink.

        Args:
            entry: JSON-serialisable transcript entry (digest, type, direction)
        """
        self.counts["frames"] += 1
        logger.bind(TRANSCRIPT=True).info(json.dumps(entry, default=str))

    def log_fault(self, fault_type: str, msg_type: str, parameters: Dict[str, Any]) -> None:
        """Log an injected transport fault.

        Args:
            fault_type: Type of fault
            msg_type: Frame type the fault applies to
            parameters: Fault parameters
        """
        self.counts["faults"] += 1
        logger.bind(
            log_type="fault",
            fault_type=fault_type,
            msg_type=msg_type,
        ).warning(f"Fault injected: {fault_type} on {msg_type} {parameters}")

    def log_performance(self, metric_name: str, value: float,
                        unit: str = "", metadata: Optional[Dict[str, Any]] = None) -> None:
        """Log performance metric.

        Args:
            metric_name: Name of the metric
            value: Metric value
            unit: Unit of measurement
            metadata: Additional metadata
        """
        if not self.enabled:
            return

        log_data = {
            "metric": metric_name,
            "value": value,
            "unit": unit,
            "timestamp": datetime.now().isoformat(),
            **(metadata or {}),
        }
        logger.bind(PERFORMANCE=True).info(json.dumps(log_data))

    def log_system_event(self, event_type: str, message: str,
                         data: Optional[Dict[str, Any]] = None) -> None:
        """Log system event.

        Args:
            event_type: Type of event
            message: Event message
            data: Event data
        """
        logger.bind(log_type="system_event", event_type=event_type).info(f"System Event: {message}")

    def log_security_event(self, event_type: str, message: str, severity: str = "medium") -> None:
        """Log security-relevant events such as session reuse or degraded parameters.

        Args:
            event_type: Type of security event
            message: Event message
            severity: Event severity
        """
        self.counts["security_events"] += 1
        log_level = "ERROR" if severity == "high" else "WARNING"
        logger.bind(
            log_type="security_event",
            event_type=event_type,
            severity=severity,
        ).log(log_level, f"Security Event: {message}")

    def get_logger(self, name: str) -> Logger:
        """Get a logger bound to a component name."""
        return logger.bind(component=name)

    def set_log_level(self, level: str) -> None:
        """Set the logging level.

        Args:
            level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        """
        self.log_level = level.upper()
        self._configure_logger()
        logger.debug(f"Log level changed to {self.log_level}")

    def get_log_statistics(self) -> Dict[str, Any]:
        """Get logging statistics."""
        log_path = Path(self.log_file)
        return {
            "log_level": self.log_level,
            "log_file": self.log_file,
            "log_file_exists": log_path.exists(),
            "transcript_file": self.transcript_file,
            "performance_tracking_enabled": self.enabled,
            **self.counts,
        }


# Global logger instance
ibbs_logger = IbbsLogger()
