"""HTTP boundary: FastAPI routes over the application container.

Every endpoint delegates to exactly one service operation; errors carry
stable codes and map onto 401/403/404/409/422/502.
"""

from __future__ import annotations

import json
import os
from typing import Optional

from fastapi import Depends, FastAPI, File, Form, Request, UploadFile
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .config import AppConfig
from .errors import (
    AuthenticationError,
    ConflictError,
    ContextOverflowError,
    ForbiddenError,
    GatewayError,
    IclsError,
    NotFoundError,
    ValidationError,
)
from .service import Application


def _status_for(error: IclsError) -> int:
    if isinstance(error, AuthenticationError):
        return 401
    if isinstance(error, ForbiddenError):
        return 403
    if isinstance(error, NotFoundError):
        return 404
    if isinstance(error, ConflictError):
        return 409
    if isinstance(error, (ValidationError, ContextOverflowError)):
        return 422
    if isinstance(error, GatewayError):
        return 502
    return 500


class RegisterBody(BaseModel):
    name: str
    email: str
    password: str
    immersion_country: str
    learning_motivation: str = ""
    self_rated_knowledge: int = 3
    daily_goal_minutes: int = 15
    notifications_opt_in: bool = False
    org_id: Optional[str] = None


class LoginBody(BaseModel):
    email: str
    password: str


class EnrollBody(BaseModel):
    country_id: str


class WatchBody(BaseModel):
    seconds: Optional[int] = None


class SubmitBody(BaseModel):
    answers: dict[str, int] = Field(default_factory=dict)


class ChatBody(BaseModel):
    question: str
    k: Optional[int] = None


class FriendBody(BaseModel):
    to_learner_id: str


def create_app(app_or_config=None) -> FastAPI:
    if isinstance(app_or_config, Application):
        service = app_or_config
    else:
        service = Application(app_or_config or AppConfig.from_env())

    api = FastAPI(title="ICLS", version="0.1.0")
    api.state.service = service

    def bearer_token(request: Request) -> str | None:
        header = request.headers.get("Authorization", "")
        return header[7:] if header.startswith("Bearer ") else None

    def current_learner(request: Request) -> str:
        return service.authenticate(bearer_token(request))

    def admin_guard(request: Request) -> None:
        token = bearer_token(request)
        if token is None:
            raise AuthenticationError("missing bearer token")
        service.require_admin(token)

    @api.exception_handler(IclsError)
    async def icls_error_handler(_request, exc: IclsError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    # -- auth ---------------------------------------------------------------

    @api.post("/api/v1/auth/register", status_code=201)
    def register(body: RegisterBody):
        return service.register(body.model_dump())

    @api.post("/api/v1/auth/login")
    def login(body: LoginBody):
        return service.login(body.email, body.password)

    @api.post("/api/v1/auth/logout", status_code=204)
    def logout(request: Request):
        service.logout(bearer_token(request) or "")

    # -- catalog --------------------------------------------------------------

    @api.get("/api/v1/meta/countries")
    def meta_countries():
        return service.public_countries()

    @api.get("/api/v1/countries")
    def countries(learner_id: str = Depends(current_learner)):
        return service.list_countries(learner_id)

    @api.post("/api/v1/enrollments", status_code=201)
    def enroll(body: EnrollBody, learner_id: str = Depends(current_learner)):
        return service.enroll(learner_id, body.country_id)

    @api.get("/api/v1/countries/{country_id}/categories")
    def categories(country_id: str, learner_id: str = Depends(current_learner)):
        return service.list_categories(learner_id, country_id)

    @api.get("/api/v1/categories/{category_id}/lessons")
    def lessons(category_id: str, learner_id: str = Depends(current_learner)):
        return service.list_lessons(learner_id, category_id)

    @api.get("/api/v1/lessons/{lesson_id}")
    def lesson(lesson_id: str, learner_id: str = Depends(current_learner)):
        return service.lesson_detail(learner_id, lesson_id)

    @api.get("/api/v1/stories")
    def stories(learner_id: str = Depends(current_learner)):
        return service.stories()

    # -- lesson flow ----------------------------------------------------------

    @api.post("/api/v1/units/{unit_id}/watch")
    def watch(unit_id: str, body: WatchBody, learner_id: str = Depends(current_learner)):
        return service.watch_unit(learner_id, unit_id, body.seconds)

    @api.get("/api/v1/units/{unit_id}/summary")
    def unit_summary(unit_id: str, learner_id: str = Depends(current_learner)):
        return service.unit_summary(learner_id, unit_id)

    @api.get("/api/v1/units/{unit_id}/quiz")
    def unit_quiz(unit_id: str, learner_id: str = Depends(current_learner)):
        return service.unit_quiz(learner_id, unit_id)

    @api.post("/api/v1/quizzes/{quiz_id}/submit")
    def submit(quiz_id: str, body: SubmitBody, learner_id: str = Depends(current_learner)):
        return service.submit_quiz(learner_id, quiz_id, body.answers)

    @api.post("/api/v1/units/{unit_id}/chat")
    def chat(unit_id: str, body: ChatBody, learner_id: str = Depends(current_learner)):
        return service.chat_with_unit(learner_id, unit_id, body.question, body.k)

    # -- gamification/social ----------------------------------------------------

    @api.get("/api/v1/leaderboard")
    def leaderboard(
        scope: str = "global",
        subject: Optional[str] = None,
        limit: Optional[int] = None,
        learner_id: str = Depends(current_learner),
    ):
        return service.leaderboard(learner_id, scope, subject, limit)

    @api.get("/api/v1/profile")
    def profile(learner_id: str = Depends(current_learner)):
        return service.profile_overview(learner_id)

    @api.get("/api/v1/recommendations")
    def recommendations(learner_id: str = Depends(current_learner)):
        return service.recommendations(learner_id)

    @api.post("/api/v1/friends/requests", status_code=201)
    def send_friend_request(body: FriendBody, learner_id: str = Depends(current_learner)):
        return service.send_friend_request(learner_id, body.to_learner_id)

    @api.post("/api/v1/friends/requests/{request_id}/accept")
    def accept_friend_request(request_id: str, learner_id: str = Depends(current_learner)):
        return service.respond_friend_request(learner_id, request_id, accept=True)

    @api.post("/api/v1/friends/requests/{request_id}/decline")
    def decline_friend_request(request_id: str, learner_id: str = Depends(current_learner)):
        return service.respond_friend_request(learner_id, request_id, accept=False)

    @api.get("/api/v1/friends")
    def friends(learner_id: str = Depends(current_learner)):
        return service.list_friends(learner_id)

    @api.get("/api/v1/daily-challenge")
    def daily_challenge(learner_id: str = Depends(current_learner)):
        return service.daily_challenge(learner_id)

    @api.post("/api/v1/daily-challenge/claim")
    def claim_daily_challenge(learner_id: str = Depends(current_learner)):
        return service.claim_daily_challenge(learner_id)

    # -- admin -----------------------------------------------------------------

    @api.post("/api/v1/admin/units", status_code=201, dependencies=[Depends(admin_guard)])
    def admin_upload(metadata: str = Form(...), file: UploadFile = File(...)):
        try:
            parsed = json.loads(metadata)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"metadata is not valid JSON: {exc}") from exc
        payload = file.file.read()
        return service.admin_upload(parsed, payload)

    @api.get("/api/v1/admin/units/{unit_id}", dependencies=[Depends(admin_guard)])
    def admin_unit(unit_id: str):
        return service.admin_unit(unit_id)

    ui_dist = service.config.ui_dist_path
    if ui_dist and os.path.isdir(ui_dist):
        api.mount("/", StaticFiles(directory=ui_dist, html=True), name="ui")

    return api
