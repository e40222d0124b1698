import { ApiError } from "../api";
import type { AppContext } from "../context";
import { activeCountry } from "../context";
import { clear, el, errorBox, toast } from "../dom";

const SCOPES = ["global", "country", "friends", "organization"] as const;

export async function renderLeaderboard(root: HTMLElement, ctx: AppContext): Promise<void> {
  let scope: (typeof SCOPES)[number] = "global";
  const switcher = el("div", { class: "scope-switcher", "data-testid": "scope-switcher" });
  const table = el("div", { class: "card board" });
  const challengeBox = el("div", { class: "card challenge" });
  const friendsBox = el("div", { class: "card friends" });

  async function reloadBoard(): Promise<void> {
    clear(switcher);
    for (const s of SCOPES) {
      const button = el(
        "button",
        { class: s === scope ? "tab active" : "tab", "data-testid": `scope-${s}` },
        s,
      );
      button.addEventListener("click", async () => {
        scope = s;
        await reloadBoard();
      });
      switcher.append(button);
    }
    clear(table);
    try {
      const subject = scope === "country" ? (activeCountry() ?? undefined) : undefined;
      const board = await ctx.api.leaderboard(scope, subject, 50);
      table.append(el("h3", {}, `Rankings — ${scope}`));
      for (const entry of board.entries) {
        table.append(
          el(
            "div",
            { class: "board-row" },
            el("span", { class: "rank" }, `#${entry.rank}`),
            el("span", { class: "name" }, entry.name),
            el("span", { class: "xp" }, `${entry.total_xp} XP`),
          ),
        );
      }
      if (board.entries.length === 0) table.append(el("p", {}, "Nobody here yet."));
    } catch (error) {
      table.append(errorBox(error instanceof ApiError ? error.message : "Could not load board"));
    }
  }

  async function reloadChallenge(): Promise<void> {
    clear(challengeBox);
    const challenge = await ctx.api.dailyChallenge();
    challengeBox.append(el("h3", {}, `Daily challenge — ${challenge.date}`));
    if (!challenge.quiz_id) {
      challengeBox.append(el("p", {}, "No challenge quiz published yet."));
      return;
    }
    challengeBox.append(
      el(
        "p",
        {},
        challenge.completed
          ? "Challenge quiz completed."
          : "Finish today's challenge quiz to unlock the reward.",
      ),
    );
    const claim = el(
      "button",
      { class: "primary", "data-testid": "claim-challenge" },
      `Claim ${challenge.reward_coins} coins`,
    );
    if (challenge.claimed || !challenge.completed) claim.setAttribute("disabled", "true");
    claim.addEventListener("click", async () => {
      try {
        const result = await ctx.api.claimDailyChallenge();
        toast(`+${result.coin_delta} coins`);
        void ctx.refreshHeader();
        await reloadChallenge();
      } catch (error) {
        challengeBox.append(errorBox(error instanceof ApiError ? error.message : "Claim failed"));
      }
    });
    challengeBox.append(claim);
    if (challenge.claimed) challengeBox.append(el("p", { class: "muted" }, "Claimed for today."));
  }

  async function reloadFriends(): Promise<void> {
    clear(friendsBox);
    const friends = await ctx.api.friends();
    friendsBox.append(el("h3", {}, "Friends"));
    for (const friend of friends.friends) {
      friendsBox.append(el("div", { class: "friend-row" }, `${friend.name} (${friend.learner_id})`));
    }
    if (friends.friends.length === 0) friendsBox.append(el("p", {}, "No friends yet."));

    if (friends.incoming.length > 0) friendsBox.append(el("h4", {}, "Incoming requests"));
    for (const request of friends.incoming) {
      const accept = el("button", { class: "primary" }, "Accept");
      const decline = el("button", { class: "secondary" }, "Decline");
      accept.addEventListener("click", async () => {
        await ctx.api.respondFriendRequest(request.request_id, true);
        await Promise.all([reloadFriends(), reloadBoard()]);
      });
      decline.addEventListener("click", async () => {
        await ctx.api.respondFriendRequest(request.request_id, false);
        await reloadFriends();
      });
      friendsBox.append(
        el("div", { class: "friend-row" }, `${request.from_name} wants to connect `, accept, decline),
      );
    }

    const idInput = el("input", { placeholder: "Friend's learner id" });
    const send = el("button", { class: "secondary" }, "Send request");
    const form = el("form", { class: "friend-form" }, idInput, send);
    form.addEventListener("submit", async (event) => {
      event.preventDefault();
      try {
        await ctx.api.sendFriendRequest(idInput.value.trim());
        idInput.value = "";
        toast("Request sent");
        await reloadFriends();
      } catch (error) {
        friendsBox.append(errorBox(error instanceof ApiError ? error.message : "Request failed"));
      }
    });
    friendsBox.append(form);
  }

  clear(root).append(el("h2", {}, "Leaderboard"), switcher, table, challengeBox, friendsBox);
  await Promise.all([reloadBoard(), reloadChallenge(), reloadFriends()]);
}
