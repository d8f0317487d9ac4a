"""
Конфігурація обчислювального конвеєра
"""

from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Налаштування cyquot"""

    # Application
    APP_NAME: str = "cyquot"

    # Паралелізм (CYQUOT_JOBS - запасне значення для --jobs)
    JOBS: int = Field(1, ge=1)

    # Output
    OUTPUT_FORMAT: Literal["json", "csv", "md"] = "md"

    # Перевірка зафіксованих чисел (код виходу 2 при розбіжності)
    PIN_COUNTS: bool = True
    EXPECTED_COUNTS_PATH: Optional[str] = None

    # Логи йдуть у stderr; WARNING, щоб stdout CLI лишався детермінованим
    LOG_LEVEL: str = "WARNING"

    # Запобіжник для замикання нормалізатора
    CLOSURE_CAP: int = Field(10 * 2592, ge=1)

    class Config:
        env_file = ".env"
        env_prefix = "CYQUOT_"
        case_sensitive = True


settings = Settings()
