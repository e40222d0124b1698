// REST client for the learning backend. The UI never computes grades, XP,
// or proficiency itself; every displayed value comes from these payloads.

export interface PublicCountry {
  country_id: string;
  name: string;
}

export interface Country extends PublicCountry {
  category_count: number;
  enrolled: boolean;
}

export interface CategoryCard {
  category_id: string;
  name: string;
  lesson_count: number;
  unit_count: number;
  progress: number;
}

export interface LessonCard {
  lesson_id: string;
  title: string;
  unit_count: number;
  progress: number;
}

export interface UnitDetail {
  unit_id: string;
  kind: string;
  source_name: string;
  raw_text: string;
  progress_state: string;
  has_summary: boolean;
  has_quiz: boolean;
  indexed: boolean;
}

export interface LessonDetail {
  lesson_id: string;
  title: string;
  category_id: string;
  category_name: string;
  country_id: string;
  units: UnitDetail[];
}

export interface SummaryPayload {
  summary_id: string;
  unit_id: string;
  text: string;
  word_count: number;
  strategy: string;
}

export interface QuizQuestion {
  ordinal: number;
  stem: string;
  options: string[];
}

export interface QuizPayload {
  quiz_id: string;
  unit_id: string;
  questions: QuizQuestion[];
}

export interface QuestionFeedback {
  answered: boolean;
  correct: boolean;
}

export interface GradeEnvelope {
  submission_id: string;
  grade: {
    correct_count: number;
    total: number;
    score: number;
    per_question: QuestionFeedback[];
  };
  xp_delta: number;
  coin_delta: number;
  new_badges: { kind: string; subject_id: string }[];
  progress_state: string;
  challenge_completed: boolean;
}

export interface ChatReply {
  unit_id: string;
  question: string;
  answer_text: string;
  used_chunk_ids: string[];
  xp_delta: number;
  progress_state: string;
}

export interface StreakInfo {
  current_length: number;
  last_active_utc_date: string | null;
}

export interface BadgeInfo {
  kind: string;
  subject_id: string;
  awarded_at?: string;
}

export interface Profile {
  learner_id: string;
  name: string;
  email: string;
  immersion_country: string;
  learning_motivation: string;
  self_rated_knowledge: number;
  daily_goal_minutes: number;
  notifications_opt_in: boolean;
  org_id: string | null;
  total_xp: number;
  total_coins: number;
  streak: StreakInfo;
  badges: BadgeInfo[];
  proficiency: { country_id: string; value: number }[];
}

export interface LeaderboardEntry {
  rank: number;
  learner_id: string;
  name: string;
  total_xp: number;
}

export interface LeaderboardPayload {
  scope: string;
  subject: string | null;
  entries: LeaderboardEntry[];
}

export interface FriendRequestInfo {
  request_id: string;
  from_learner: string;
  from_name: string;
  to_learner: string;
  to_name: string;
  state: string;
}

export interface FriendsPayload {
  friends: { learner_id: string; name: string }[];
  incoming: FriendRequestInfo[];
  outgoing: FriendRequestInfo[];
}

export interface DailyChallenge {
  date: string;
  quiz_id: string | null;
  unit_id: string | null;
  completed: boolean;
  claimed: boolean;
  reward_coins: number;
}

export interface Story {
  story_id: string;
  title: string;
  url: string;
}

export interface Recommendation {
  lesson_id: string;
  title: string;
  category_id: string;
  category_name: string;
  country_id: string;
}

export interface RegisterFields {
  name: string;
  email: string;
  password: string;
  immersion_country: string;
  learning_motivation: string;
  self_rated_knowledge: number;
  daily_goal_minutes: number;
  notifications_opt_in: boolean;
  org_id?: string | null;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

const TOKEN_KEY = "icls.token";

export class ApiClient {
  constructor(
    private base: string = "/api/v1",
    private fetcher: FetchLike = (...args) => fetch(...args),
    private storage: Storage = window.localStorage,
  ) {}

  get token(): string | null {
    return this.storage.getItem(TOKEN_KEY);
  }

  set token(value: string | null) {
    if (value === null) this.storage.removeItem(TOKEN_KEY);
    else this.storage.setItem(TOKEN_KEY, value);
  }

  get authenticated(): boolean {
    return this.token !== null;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await this.fetcher(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.status === 204) return undefined as T;
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const error = (payload as { error?: { code?: string; message?: string } }).error ?? {};
      throw new ApiError(response.status, error.code ?? "error", error.message ?? response.statusText);
    }
    return payload as T;
  }

  // auth
  register(fields: RegisterFields): Promise<{ learner_id: string }> {
    return this.request("POST", "/auth/register", fields);
  }

  async login(email: string, password: string): Promise<void> {
    const result = await this.request<{ token: string }>("POST", "/auth/login", {
      email,
      password,
    });
    this.token = result.token;
  }

  async logout(): Promise<void> {
    try {
      await this.request("POST", "/auth/logout");
    } finally {
      this.token = null;
    }
  }

  // catalog
  metaCountries(): Promise<PublicCountry[]> {
    return this.request("GET", "/meta/countries");
  }

  countries(): Promise<Country[]> {
    return this.request("GET", "/countries");
  }

  enroll(countryId: string): Promise<unknown> {
    return this.request("POST", "/enrollments", { country_id: countryId });
  }

  categories(countryId: string): Promise<CategoryCard[]> {
    return this.request("GET", `/countries/${countryId}/categories`);
  }

  lessons(categoryId: string): Promise<LessonCard[]> {
    return this.request("GET", `/categories/${categoryId}/lessons`);
  }

  lesson(lessonId: string): Promise<LessonDetail> {
    return this.request("GET", `/lessons/${lessonId}`);
  }

  stories(): Promise<Story[]> {
    return this.request("GET", "/stories");
  }

  // lesson flow
  watch(unitId: string, seconds?: number): Promise<{ xp_delta: number; progress_state: string }> {
    return this.request("POST", `/units/${unitId}/watch`, seconds ? { seconds } : {});
  }

  summary(unitId: string): Promise<SummaryPayload> {
    return this.request("GET", `/units/${unitId}/summary`);
  }

  quiz(unitId: string): Promise<QuizPayload> {
    return this.request("GET", `/units/${unitId}/quiz`);
  }

  submit(quizId: string, answers: Record<number, number>): Promise<GradeEnvelope> {
    return this.request("POST", `/quizzes/${quizId}/submit`, { answers });
  }

  chat(unitId: string, question: string): Promise<ChatReply> {
    return this.request("POST", `/units/${unitId}/chat`, { question });
  }

  // gamification / social
  leaderboard(scope: string, subject?: string, limit?: number): Promise<LeaderboardPayload> {
    const params = new URLSearchParams({ scope });
    if (subject) params.set("subject", subject);
    if (limit) params.set("limit", String(limit));
    return this.request("GET", `/leaderboard?${params}`);
  }

  profile(): Promise<Profile> {
    return this.request("GET", "/profile");
  }

  recommendations(): Promise<Recommendation[]> {
    return this.request("GET", "/recommendations");
  }

  friends(): Promise<FriendsPayload> {
    return this.request("GET", "/friends");
  }

  sendFriendRequest(toLearnerId: string): Promise<FriendRequestInfo> {
    return this.request("POST", "/friends/requests", { to_learner_id: toLearnerId });
  }

  respondFriendRequest(requestId: string, accept: boolean): Promise<FriendRequestInfo> {
    const action = accept ? "accept" : "decline";
    return this.request("POST", `/friends/requests/${requestId}/${action}`);
  }

  dailyChallenge(): Promise<DailyChallenge> {
    return this.request("GET", "/daily-challenge");
  }

  claimDailyChallenge(): Promise<{ date: string; coin_delta: number }> {
    return this.request("POST", "/daily-challenge/claim");
  }
}
