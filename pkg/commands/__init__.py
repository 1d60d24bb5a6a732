"""
Commands package for the command line.
All subcommand handlers are organized into separate modules here.
"""
from .analysis import analysis_cmds
from .coding import coding_cmds
from .constructions import construction_cmds
from .finite import finite_cmds

COMMAND_GROUPS = [analysis_cmds, construction_cmds, finite_cmds, coding_cmds]

__all__ = ['COMMAND_GROUPS', 'analysis_cmds', 'construction_cmds', 'finite_cmds', 'coding_cmds']
