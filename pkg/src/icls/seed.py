"""Demo content seeding.

Builds a small catalog through the real admin pipeline (so summaries,
quizzes, and the vector index all exist) plus a few story entries. The
lesson texts are deterministic generated filler — stand-ins for real
curriculum documents.
"""

from __future__ import annotations

import random

from .domain import CATEGORY_CATALOG
from .service import Application

_TOPIC_WORDS = {
    "Art": "brushwork pigment canvas woodblock gallery sketch portrait sculpture",
    "Music": "melody drum flute chorus rhythm scale ensemble concert",
    "Cinema": "director screen montage studio premiere reel script actor",
    "Literature": "novel poem manuscript author chapter verse folklore epic",
    "Festivals": "procession lantern bonfire parade offering costume feast season",
    "Fashion": "garment silk embroidery tailor pattern dye weave attire",
    "Cuisine": "broth spice noodle ferment market skillet harvest recipe",
    "Beverage": "tea brew leaf infusion cup ceremony roast blend",
    "Customs": "greeting etiquette gift bow household elder ritual courtesy",
    "Dance": "step ensemble costume drumbeat stage gesture circle form",
    "Travel": "route harbor shrine trail lodging market district landscape",
}

_FILLER = (
    "people gather each year to share stories and skills passed between "
    "generations while visitors learn how local practice shapes daily life"
).split()


def lesson_text(country: str, category: str, paragraphs: int = 6) -> str:
    """Deterministic pseudo-curriculum text, ~500 words, keyword-rich."""
    rng = random.Random(f"{country}:{category}")
    topic = _TOPIC_WORDS[category].split()
    out = []
    for _ in range(paragraphs):
        sentences = []
        for _ in range(5):
            words = [country.lower(), rng.choice(topic)]
            words += rng.sample(_FILLER, k=8)
            words.append(rng.choice(topic))
            rng.shuffle(words)
            sentences.append(" ".join(words).capitalize() + ".")
        out.append(" ".join(sentences))
    return "\n\n".join(out)


def seed_demo(service: Application) -> dict:
    """Idempotent-ish demo seed; returns counts of created entities."""
    created = {"units": 0, "stories": 0}
    plans = [("Japan", list(CATEGORY_CATALOG)), ("India", ["Art", "Music", "Cuisine"])]
    existing_sources = {
        unit.source_name for unit in service.catalog.units.values()
    }
    for country, categories in plans:
        for category in categories:
            source_name = f"{country.lower()}-{category.lower()}.txt"
            if source_name in existing_sources:
                continue
            service.admin_upload(
                {
                    "country": country,
                    "category": category,
                    "lesson": f"Introduction to {category} in {country}",
                    "kind": "document",
                    "source_name": source_name,
                },
                lesson_text(country, category),
            )
            created["units"] += 1
    stories = [
        ("story-000001", "A winter exchange semester", "https://example.org/podcasts/winter-exchange"),
        ("story-000002", "Working across three time zones", "https://example.org/podcasts/three-time-zones"),
        ("story-000003", "Hosting a harvest dinner abroad", "https://example.org/podcasts/harvest-dinner"),
    ]
    for story_id, title, url in stories:
        service.add_story(story_id, title, url)
        created["stories"] += 1
    return created
