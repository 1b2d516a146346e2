"""Preferred repairs of inconsistent relational databases.

Conflict graphs under functional dependencies, priorities on conflicts,
local (l-) and global (g-) preferred repairs, consistent query answering
over each repair family, and instance generators for the hardness gadgets.
"""

__version__ = "0.1.0"
