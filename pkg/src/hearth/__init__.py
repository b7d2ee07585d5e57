"""hearth: an LLM-driven household agent in a simulated two-room world.

A pluggable reasoning backend (scripted, recorded replay, or an
OpenAI-compatible chat model) drives a mobile agent through a
tool-calling interface: navigation on a semantic map, grasping and
placing objects in furniture slots, a per-task scratchpad, and a
persistent episodic memory of task reports. An evaluation harness
measures believed versus actual task success, and a JSON-RPC server
exposes the same tools to external agents.
"""

__version__ = "0.1.0"
