# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import os
import time
import platform
import traceback
from enum import unique, IntEnum
from fractions import Fraction
from functools import partial, wraps

import sentry_sdk
from sentry_sdk import init as sentry_init, add_breadcrumb, capture_exception, configure_scope

from components.providerbase import BaseProvider, INeedsExperimentSettings
from components.utilities import format_rational

VERSION = "1.0.0"


@unique
class LogLevel(IntEnum):
    Fatal = 1
    Error = 2
    Warning = 3
    Info = 4
    Debug = 5
    Debug2 = 6

    @staticmethod
    def parse(value):
        """A level from its number or its (case-insensitive) name."""
        if isinstance(value, LogLevel):
            return value
        if isinstance(value, str) and not value.strip().isdigit():
            for level in LogLevel:
                if level.name.lower() == value.strip().lower():
                    return level
            raise ValueError("Unknown log level %r; expected one of %s" % (value, [lvl.name for lvl in LogLevel]))
        if isinstance(value, bool):
            raise ValueError("Unknown log level %r" % (value,))
        return LogLevel(int(value))


def render(arg):
    """Exact rationals print as p/q rather than Fraction(p, q)."""
    if isinstance(arg, Fraction):
        return str(format_rational(arg))
    return str(arg)


def describe(arg):
    # Instances and allocations are too large to print whole
    if hasattr(arg, 'buyers') and hasattr(arg, 'items') and hasattr(arg, 'kind'):
        return "<%s instance: %s buyers, %s items>" % (arg.kind.value, len(arg.buyers), len(arg.items))
    text = render(arg)
    return text if len(text) <= 100 else text[0:100] + "..."


def logEntryExit(func, print_arg_list=True):
    @wraps(func)
    def func_wrapper(*args, **kwargs):
        obj = args[0]
        assert 'logger' in dir(obj), "If @logEntryExit is applied to a class method, it must inherit INeedsLoggingProvider"
        obj.logger.log("================================================", level=LogLevel.Debug)
        obj.logger.log("Beginning %s" % func.__qualname__, level=LogLevel.Info)
        if print_arg_list:
            described = [describe(a) for a in args[1:]] + ["%s=%s" % (k, describe(v)) for k, v in kwargs.items()]
            obj.logger.log(" Arguments: %s" % ", ".join(described), level=LogLevel.Debug)
        else:
            obj.logger.log(" Arguments: [Omitted %s args]" % (len(args) - 1 + len(kwargs)), level=LogLevel.Debug)
        start = time.perf_counter()
        ret = func(*args, **kwargs)
        elapsed = time.perf_counter() - start
        if type(ret) == list:
            obj.logger.log("Function returned a list of %s objects" % len(ret), level=LogLevel.Debug)
        elif type(ret) == tuple:
            obj.logger.log("Function returned (%s)" % ", ".join(describe(r) for r in ret), level=LogLevel.Debug)
        else:
            obj.logger.log("Function returned %s" % describe(ret), level=LogLevel.Debug)
        obj.logger.log("Ending %s after %.3fs" % (func.__qualname__, elapsed), level=LogLevel.Info)
        return ret
    return func_wrapper


logEntryExitNoArgs = partial(logEntryExit, print_arg_list=False)


class LoggingProvider(BaseProvider):
    # The instance (and Monte Carlo trial) currently under study, appended
    # to every category
    context = ""

    def __init__(self, config):
        self.loggers = []
        if 'local' in config and config['local']:
            self.loggers.append(LocalLogger(config))
        if 'sentry' in config and config['sentry']:
            self.loggers.append(SentryLogger(config))

    def _update_config(self, additional_config):
        for logger in self.loggers:
            logger.update_config(additional_config)

    def log(self, *args, level=LogLevel.Info, category=None):
        if LoggingProvider.context != "":
            category = f"{category} {LoggingProvider.context}"
        for logger in self.loggers:
            logger.log(*args, level=level, category=category)

    def log_exception(self, e):
        for logger in self.loggers:
            logger.log_exception(e)

    @staticmethod
    def set_context(instance_id, trial=None):
        LoggingProvider.context = str(instance_id)
        sentry_sdk.set_tag("instance", str(instance_id))
        if trial is not None:
            LoggingProvider.context += " trial=" + str(trial)
            sentry_sdk.set_tag("trial", str(trial))

    @staticmethod
    def clear_context():
        LoggingProvider.context = ""
        with configure_scope() as scope:
            scope.remove_tag("instance")
            scope.remove_tag("trial")


class LoggerInstance(BaseProvider):
    def __init__(self):
        pass

    def log(self, *args, level, category):
        assert False, "Subclass should implement this function"

    def log_exception(self, e):
        assert False, "Subclass should implement this function"


class LocalLogger(LoggerInstance):
    def __init__(self, config):
        if 'ALLOC_LOG_LEVEL' in os.environ:
            self.min_log_level = LogLevel.parse(os.environ['ALLOC_LOG_LEVEL'])
        elif 'level' in config:
            self.min_log_level = LogLevel.parse(config['level'])
        else:
            self.min_log_level = LogLevel.Info

        self.log_component = os.environ.get('ALLOC_LOG_COMPONENT', "").lower()

    def log(self, *args, level, category):
        if category and self.log_component not in category.lower():
            return
        if level.value <= self.min_log_level:
            prefix = ("[" + level.name + "]").ljust(9)
            prefix += ("(" + category + ")") if category else ""
            print(prefix, *[render(a) for a in args], flush=True)

    def log_exception(self, e):
        bt = traceback.format_exc()
        print(bt, flush=True)


class SentryLogger(LoggerInstance, INeedsExperimentSettings):
    def __init__(self, config):
        # See https://stackoverflow.com/q/53699110
        sentry_sdk.utils.MAX_STRING_LENGTH = 8192
        assert 'sentry' in config and config['sentry']
        assert 'sentry_config' in config, "Sentry logger requires a sentry_config key"
        assert 'url' in config['sentry_config'], "Sentry logger requires a url key in sentry_config"
        self.config = config

    def _update_config(self, additional_config):
        sentry_init(
            dsn=self.config['sentry_config']['url'],
            debug=self.config['sentry_config'].get('debug', False),
            release="onlinealloc-" + VERSION,
            max_breadcrumbs=5000,
            environment=platform.node())

        with configure_scope() as scope:
            scope.set_extra("seed", self.seed)
            scope.set_extra("trials", self.trials)
            scope.set_extra("g", self.g_name)
            if 'ALLOC_WORKERS' in os.environ:
                scope.set_extra("ALLOC_WORKERS", os.environ['ALLOC_WORKERS'])

    def log(self, *args, level, category):
        add_breadcrumb(category=category, level=level.name.lower(), message=" ".join([render(i) for i in args]))

    def log_exception(self, e):
        capture_exception(e)


class SimpleLogger(LoggingProvider):
    def __init__(self, config=None):
        super().__init__(config or {'local': True})


simpleLogger = SimpleLogger()

SimpleLoggerConfig = {
    'LoggingProvider': simpleLogger
}


def log(*args, **kwargs):
    simpleLogger.log(*args, **kwargs)
