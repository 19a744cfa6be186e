from typing import Dict, Type

from constants.Constants import (
    STRATEGY_CLASSICAL, STRATEGY_CURVE, STRATEGY_PERFECT, STRATEGY_LAW, STRATEGY_QUANTUM_BISECTOR
)
from exceptions.wse_exceptions import ValidationException
from .attack_strategy import (
    AttackStrategy,
    ClassicalStrategy,
    CurveStrategy,
    FixedLawStrategy,
    PerfectStrategy,
    QuantumBisectorStrategy
)

class StrategyFactory:
    """Factory class for creating and managing attack strategies."""

    _strategies: Dict[str, Type[AttackStrategy]] = {}
    _default_strategy: str = STRATEGY_CLASSICAL

    @classmethod
    def register_strategy(cls, name: str, strategy_class: Type[AttackStrategy]) -> None:
        """Register a new attack strategy.

        Args:
            name: Unique identifier for the strategy
            strategy_class: Class implementing AttackStrategy
        """
        cls._strategies[name] = strategy_class

    @classmethod
    def get_strategy(cls, name: str, **kwargs) -> AttackStrategy:
        """Get an instance of an attack strategy.

        Args:
            name: Name of the strategy
            **kwargs: Arguments passed to the strategy constructor

        Returns:
            An instance of the requested strategy

        Raises:
            ValidationException: If the strategy is not registered or rejects its arguments
        """
        if name not in cls._strategies:
            raise ValidationException(
                f"Strategy '{name}' is not registered; known: {', '.join(sorted(cls._strategies))}"
            )
        try:
            return cls._strategies[name](**kwargs)
        except TypeError as e:
            raise ValidationException(f"Invalid arguments for strategy '{name}': {e}")

    @classmethod
    def get_default_strategy(cls, **kwargs) -> AttackStrategy:
        return cls.get_strategy(cls._default_strategy, **kwargs)

    @classmethod
    def list_strategies(cls) -> Dict[str, Type[AttackStrategy]]:
        """Get all registered strategies.

        Returns:
            Dictionary mapping strategy names to their classes
        """
        return cls._strategies.copy()

# Register the built-in strategies
StrategyFactory.register_strategy(STRATEGY_CLASSICAL, ClassicalStrategy)
StrategyFactory.register_strategy(STRATEGY_CURVE, CurveStrategy)
StrategyFactory.register_strategy(STRATEGY_PERFECT, PerfectStrategy)
StrategyFactory.register_strategy(STRATEGY_LAW, FixedLawStrategy)
StrategyFactory.register_strategy(STRATEGY_QUANTUM_BISECTOR, QuantumBisectorStrategy)
