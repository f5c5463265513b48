// DOM rendering for the settings panel and the badged feed.
// Every function works relative to a container so tests can host the page
// in a detached document.

import type { FeedPost, SourceWarning } from "./api.js"
import { sanitizeHtml } from "./sanitize.js"
import {
  AccountRow,
  STOP_LABELS,
  STOPS,
  SliderState,
  Stop,
  stopFromIndex,
  stopIndex,
} from "./state.js"

export const BADGE_LABELS: Record<string, string> = {
  user_you_follow: "Followed user",
  hashtag_you_follow: "Followed hashtag",
  local_post: "Local",
  trending_post: "Trending",
  prioritized_account: "Prioritized",
}

const MIN_ACCOUNT_ROWS = 3

function mustFind<T extends Element>(root: ParentNode, selector: string): T {
  const el = root.querySelector(selector)
  if (!el) throw new Error(`missing element: ${selector}`)
  return el as T
}

// -- Settings panel ---------------------------------------------------------

export function readPanel(root: ParentNode): SliderState {
  const slider = (name: string): Stop =>
    stopFromIndex(Number(mustFind<HTMLInputElement>(root, `#slider-${name}`).value))
  const accounts: AccountRow[] = []
  for (const row of root.querySelectorAll(".account-row")) {
    accounts.push({
      handle: mustFind<HTMLInputElement>(row, ".account-handle").value,
      level: mustFind<HTMLSelectElement>(row, ".account-level").value as Stop,
    })
  }
  const filters = Array.from(
    root.querySelectorAll<HTMLElement>("#filter-chips .chip"),
    chip => chip.dataset.phrase ?? "",
  )
  return {
    following: slider("following"),
    local: slider("local"),
    trending: slider("trending"),
    accounts,
    filters,
    orderingMode: mustFind<HTMLSelectElement>(root, "#ordering-mode")
      .value as SliderState["orderingMode"],
  }
}

export function writePanel(root: ParentNode, state: SliderState): void {
  for (const name of ["following", "local", "trending"] as const) {
    const input = mustFind<HTMLInputElement>(root, `#slider-${name}`)
    input.value = String(stopIndex(state[name]))
    syncStopLabel(root, name)
  }
  const rowsEl = mustFind<HTMLElement>(root, "#account-rows")
  rowsEl.textContent = ""
  const rows = state.accounts.slice()
  while (rows.length < MIN_ACCOUNT_ROWS) rows.push({ handle: "", level: "low" })
  for (const row of rows) appendAccountRow(root, row)
  renderFilterChips(root, state.filters)
  mustFind<HTMLSelectElement>(root, "#ordering-mode").value = state.orderingMode
}

export function syncStopLabel(root: ParentNode, name: string): void {
  const input = mustFind<HTMLInputElement>(root, `#slider-${name}`)
  const label = mustFind<HTMLElement>(root, `.stop-label[data-for="${name}"]`)
  label.textContent = STOP_LABELS[stopFromIndex(Number(input.value))]
}

export function appendAccountRow(root: ParentNode, row?: AccountRow): void {
  const rowsEl = mustFind<HTMLElement>(root, "#account-rows")
  const doc = rowsEl.ownerDocument
  const wrapper = doc.createElement("div")
  wrapper.className = "account-row"

  const handle = doc.createElement("input")
  handle.className = "account-handle"
  handle.placeholder = "user@instance.example"
  handle.value = row?.handle ?? ""
  wrapper.appendChild(handle)

  const level = doc.createElement("select")
  level.className = "account-level"
  for (const stop of STOPS) {
    if (stop === "none") continue // a prioritized row at None is just a deleted row
    const option = doc.createElement("option")
    option.value = stop
    option.textContent = STOP_LABELS[stop]
    level.appendChild(option)
  }
  level.value = row?.level && row.level !== "none" ? row.level : "low"
  wrapper.appendChild(level)

  rowsEl.appendChild(wrapper)
}

export function renderFilterChips(root: ParentNode, filters: string[]): void {
  const chipsEl = mustFind<HTMLElement>(root, "#filter-chips")
  const doc = chipsEl.ownerDocument
  chipsEl.textContent = ""
  for (const phrase of filters) {
    const chip = doc.createElement("span")
    chip.className = "chip"
    chip.dataset.phrase = phrase
    chip.appendChild(doc.createTextNode(phrase))
    const remove = doc.createElement("button")
    remove.type = "button"
    remove.className = "chip-remove"
    remove.textContent = "×"
    remove.addEventListener("click", () => chip.remove())
    chip.appendChild(remove)
    chipsEl.appendChild(chip)
  }
}

export function showErrors(root: ParentNode, errors: string[]): void {
  const box = mustFind<HTMLElement>(root, "#settings-errors")
  box.textContent = ""
  box.hidden = errors.length === 0
  const doc = box.ownerDocument
  for (const message of errors) {
    const line = doc.createElement("p")
    line.textContent = message
    box.appendChild(line)
  }
}

// -- Feed -------------------------------------------------------------------

export function renderPosts(
  root: ParentNode,
  posts: FeedPost[],
  mode: "replace" | "append",
): void {
  const list = mustFind<HTMLElement>(root, "#feed-list")
  const doc = list.ownerDocument
  const fragment = doc.createDocumentFragment()
  for (const post of posts) fragment.appendChild(renderPost(doc, post))
  if (mode === "replace") list.textContent = ""
  list.appendChild(fragment)
}

function renderPost(doc: Document, post: FeedPost): HTMLElement {
  const article = doc.createElement("article")
  article.className = "post"
  article.dataset.id = post.id

  const header = doc.createElement("header")
  const author = doc.createElement("span")
  author.className = "post-author"
  author.textContent = post.author
  header.appendChild(author)

  const time = doc.createElement("time")
  time.dateTime = post.created_at
  time.textContent = formatTime(post.created_at)
  header.appendChild(time)

  const badge = doc.createElement("span")
  badge.className = `badge badge--${post.badge}`
  badge.textContent = BADGE_LABELS[post.badge] ?? post.badge
  header.appendChild(badge)
  article.appendChild(header)

  if (post.boost_of) {
    const note = doc.createElement("p")
    note.className = "boost-note"
    note.textContent = `boosted by ${post.author}`
    article.appendChild(note)
  }

  const body = doc.createElement("div")
  body.className = "post-body"
  body.appendChild(sanitizeHtml(doc, post.html))
  article.appendChild(body)
  return article
}

function formatTime(iso: string): string {
  const date = new Date(iso)
  if (Number.isNaN(date.getTime())) return iso
  return date.toLocaleString(undefined, {
    month: "short",
    day: "numeric",
    hour: "2-digit",
    minute: "2-digit",
  })
}

export function setRanOutBanner(root: ParentNode, ranOut: boolean): void {
  mustFind<HTMLElement>(root, "#ran-out-banner").hidden = !ranOut
}

export function setEmptyState(root: ParentNode, empty: boolean): void {
  mustFind<HTMLElement>(root, "#feed-empty").hidden = !empty
}

export function renderWarnings(root: ParentNode, warnings: SourceWarning[]): void {
  const box = mustFind<HTMLElement>(root, "#feed-warnings")
  box.textContent = ""
  box.hidden = warnings.length === 0
  const doc = box.ownerDocument
  for (const warning of warnings) {
    const line = doc.createElement("p")
    line.textContent = `${warning.source}: ${warning.message}`
    box.appendChild(line)
  }
}

export function setSignedOut(root: ParentNode, signedOut: boolean): void {
  mustFind<HTMLElement>(root, "#signin").hidden = !signedOut
  mustFind<HTMLElement>(root, "#curation").hidden = signedOut
}
