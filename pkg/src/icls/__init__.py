"""Integrated Culture Learning Suite (ICLS).

Backend for a gamified culture-learning platform: content ingestion,
LLM-generated summaries and quizzes, retrieval-augmented chat, learner
proficiency scoring, and an XP/coin/badge/streak progression engine,
exposed over an HTTP API.
"""

__version__ = "0.1.0"
