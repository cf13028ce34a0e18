import os
import sys
import traceback


def error_message_detail(error, error_detail:sys):
    _, _, exc_tb = error_detail.exc_info()
    if exc_tb is not None:
        file_name = exc_tb.tb_frame.f_code.co_filename
        line_number = exc_tb.tb_lineno
    else:
        # raised outside an except block: report the raise site
        this_file = os.path.abspath(__file__)
        frames = [f for f in traceback.extract_stack() if os.path.abspath(f.filename) != this_file]
        file_name = frames[-1].filename if frames else "<unknown>"
        line_number = frames[-1].lineno if frames else 0
    error_message = "Error occurred python script name [{0}] line number [{1}] error message [{2}]".format(
        file_name, line_number, str(error)
    )

    return error_message

class srcException(Exception):
    def __init__(self, error_message, error_detail=sys):
        """
        :param error_message: error message in string format
        """
        super().__init__(error_message)
        self.message = str(error_message)
        self.error_message = error_message_detail(
            error_message, error_detail=error_detail
        )

    def __str__(self):
        return self.error_message


# Configuration problems (CLI exit code 2)
class ConfigError(srcException):
    pass

class DimensionTooSmall(ConfigError):
    pass


# Input data problems (CLI exit code 3)
class DataError(srcException):
    pass

class DataFileNotFound(DataError):
    pass

class ColumnMissing(DataError):
    pass

class EmptyAfterFiltering(DataError):
    pass

class ConstantColumn(DataError):
    pass

class DegenerateSample(DataError):
    pass


# Numerical failures (CLI exit code 4)
class NumericalError(srcException):
    pass

class RankDeficient(NumericalError):
    pass

class InfeasibleDesign(NumericalError):
    pass

class Exhausted(NumericalError):
    pass

class DegenerateBox(NumericalError):
    pass

class AssumptionViolated(NumericalError):
    pass

class NonConvergence(NumericalError):
    pass

class CellFailed(NumericalError):
    pass
