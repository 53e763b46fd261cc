import inspect
import logging
from functools import wraps
from types import ModuleType
from typing import Callable, Dict, List, Optional

from pydantic import BaseModel, Field

from schemas.treasure import ScenarioConfig
from utils.errors import UnknownScenarioError

logger = logging.getLogger(__name__)


class ScenarioInfo(BaseModel):
    """Scenario preset information model"""
    name: str = Field(..., description="Preset name used on the command line")
    description: str = Field(..., description="What the preset simulates")
    changing_world: bool = Field(default=False, description="Whether the treasure relocates by default")


def scenario(name: str, description: str = "", changing_world: bool = False):
    """Decorator to mark a function as a scenario preset builder"""
    def decorator(func: Callable[..., ScenarioConfig]):
        @wraps(func)
        def wrapper(*args, **kwargs) -> ScenarioConfig:
            try:
                return func(*args, **kwargs)
            except Exception as e:
                logger.error(f"Scenario {name} failed to build: {e}")
                raise

        wrapper._scenario_name = name
        wrapper._scenario_description = description or (func.__doc__ or "").strip()
        wrapper._scenario_changing_world = changing_world
        return wrapper
    return decorator


class ScenarioRegistry:
    """Registry for scenario preset builders"""

    def __init__(self):
        self.builders: Dict[str, Callable[..., ScenarioConfig]] = {}
        self.scenario_info: Dict[str, ScenarioInfo] = {}

    def register_scenario(self, func: Callable[..., ScenarioConfig], name: Optional[str] = None,
                          description: str = ""):
        """Register a preset builder"""
        scenario_name = name or getattr(func, "_scenario_name", func.__name__)
        if scenario_name in self.builders:
            logger.warning(f"Scenario {scenario_name} already registered, overwriting")

        self.builders[scenario_name] = func
        self.scenario_info[scenario_name] = ScenarioInfo(
            name=scenario_name,
            description=description or getattr(func, "_scenario_description", "") or func.__doc__ or "",
            changing_world=getattr(func, "_scenario_changing_world", False),
        )
        logger.debug(f"Registered scenario: {scenario_name}")

    def register_module(self, module: ModuleType):
        """Register every decorated builder defined in `module`"""
        for _, member in inspect.getmembers(module, callable):
            if hasattr(member, "_scenario_name"):
                self.register_scenario(member)

    def list_scenarios(self) -> List[ScenarioInfo]:
        return list(self.scenario_info.values())

    def list_scenario_names(self) -> List[str]:
        return list(self.builders.keys())

    def build(self, name: str, *args, **kwargs) -> ScenarioConfig:
        """Build the named preset"""
        builder = self.builders.get(name)
        if builder is None:
            raise UnknownScenarioError(name, self.list_scenario_names())
        return builder(*args, **kwargs)


_default_registry: Optional[ScenarioRegistry] = None


def default_registry() -> ScenarioRegistry:
    """Registry holding the built-in presets"""
    global _default_registry
    if _default_registry is None:
        from engine import presets

        _default_registry = ScenarioRegistry()
        _default_registry.register_module(presets)
    return _default_registry
