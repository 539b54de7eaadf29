#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import copy

import yaml

from components.gfunction import G_FUNCTIONS
from components.logging import LogLevel
from components.reports import FORMATS


class ConfigError(Exception):
    pass


DEFAULT_GENERAL = {
    'seed': 0,
    'trials': 10000,
    'tolerance': 1e-9,
    'mc_sigmas': 3.0,
    'out': None,
    'format': 'json',
    'g': 'exponential',
}

DEFAULT_CONFIG = {
    'General': DEFAULT_GENERAL,
    'Logging': {'local': True, 'level': 3},
    'Workers': {},
}


class ExperimentConfig:
    """
    The harness configuration: a dictionary of dictionaries, one per
    provider, plus 'General' which every provider sees.
    """

    def __init__(self, dictionary=None):
        self.dictionary = copy.deepcopy(DEFAULT_CONFIG)
        for section, values in (dictionary or {}).items():
            if values is None:
                values = {}
            if not isinstance(values, dict):
                raise ConfigError("Config section %s must be a mapping, got %r" % (section, values))
            self.dictionary.setdefault(section, {}).update(values)

    @staticmethod
    def from_yaml(path):
        try:
            with open(path, "r") as f:
                loaded = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError("Could not parse %s as YAML: %s" % (path, e))
        if loaded is not None and not isinstance(loaded, dict):
            raise ConfigError("The top level of %s must be a mapping of sections" % path)
        return ExperimentConfig(loaded)

    def with_overrides(self, **overrides):
        """A copy with the given General keys replaced; None values leave the key alone."""
        result = ExperimentConfig(self.dictionary)
        for k, v in overrides.items():
            if v is not None:
                result.dictionary['General'][k] = v
        return result

    @property
    def general(self):
        return self.dictionary['General']

    def validate(self):
        general = self.general
        for key in general:
            if key not in DEFAULT_GENERAL:
                raise ConfigError("Unknown General config key %r" % key)
        for key in ('seed', 'trials'):
            if isinstance(general[key], bool) or not isinstance(general[key], int):
                raise ConfigError("General.%s must be an integer, got %r" % (key, general[key]))
        if general['seed'] < 0:
            raise ConfigError("General.seed must be nonnegative, got %s" % general['seed'])
        if general['trials'] < 1:
            raise ConfigError("General.trials must be at least 1, got %s" % general['trials'])
        for key in ('tolerance', 'mc_sigmas'):
            try:
                general[key] = float(general[key])
            except (TypeError, ValueError):
                raise ConfigError("General.%s must be a number, got %r" % (key, general[key]))
            if general[key] < 0:
                raise ConfigError("General.%s must be nonnegative, got %s" % (key, general[key]))
        if general['format'] not in FORMATS:
            raise ConfigError("General.format must be one of %s, got %r" % (FORMATS, general['format']))
        if general['g'] not in G_FUNCTIONS:
            raise ConfigError("General.g must be one of %s, got %r" % (sorted(G_FUNCTIONS), general['g']))
        if 'level' in self.dictionary['Logging']:
            try:
                self.dictionary['Logging']['level'] = int(LogLevel.parse(self.dictionary['Logging']['level']))
            except ValueError as e:
                raise ConfigError("Logging.level: %s" % e)
        if 'max' in self.dictionary['Workers']:
            m = self.dictionary['Workers']['max']
            if isinstance(m, bool) or not isinstance(m, int) or m < 1:
                raise ConfigError("Workers.max must be a positive integer, got %r" % (m,))
        return self

    def as_dictionary(self):
        return copy.deepcopy(self.dictionary)
