"""plantutor: an interactive task-planning tutor.

Learners compose high-level plans over small STRIPS domains; the package
validates every edit, explains failures in natural language, offers
partially obscured hints from a forward-search planner, and adapts the
next practice task to the learner's per-action performance.
"""

__version__ = "0.1.0"
