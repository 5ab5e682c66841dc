import logging

from config import constants


class Component:
    """
    Superclass for the long-lived pieces of an experiment (oracles, predictors,
    learners, the framework). Used to log messages in a way that identifies each one.
    """

    name: str = ""
    color: str = constants.WHITE

    def log(self, message: str) -> None:
        """
        Log this as an info message, identifying the component.
        """
        color_code = constants.BG_BLACK + self.color
        message = f"[{self.name}] {message}"
        logging.info(color_code + message + constants.RESET)
