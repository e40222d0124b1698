import type { ApiClient } from "./api";

export interface AppContext {
  api: ApiClient;
  navigate(hash: string): void;
  refreshHeader(): Promise<void>;
}

const ACTIVE_COUNTRY_KEY = "icls.activeCountry";

export function activeCountry(storage: Storage = window.localStorage): string | null {
  return storage.getItem(ACTIVE_COUNTRY_KEY);
}

export function setActiveCountry(countryId: string, storage: Storage = window.localStorage): void {
  storage.setItem(ACTIVE_COUNTRY_KEY, countryId);
}

export interface PracticeEntry {
  quiz_id: string;
  unit_id: string;
  lesson_id: string;
  title: string;
  wrong_ordinals: number[];
}

const PRACTICE_KEY = "icls.practice";

export function practiceEntries(storage: Storage = window.localStorage): PracticeEntry[] {
  try {
    return JSON.parse(storage.getItem(PRACTICE_KEY) ?? "[]") as PracticeEntry[];
  } catch {
    return [];
  }
}

export function savePracticeEntry(entry: PracticeEntry, storage: Storage = window.localStorage): void {
  const entries = practiceEntries(storage).filter((e) => e.quiz_id !== entry.quiz_id);
  if (entry.wrong_ordinals.length > 0) entries.push(entry);
  storage.setItem(PRACTICE_KEY, JSON.stringify(entries));
}
