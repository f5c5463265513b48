// Wires the settings panel, feed region, and sign-in box to the service API.
// At most one feed request is in flight; Apply supersedes anything pending.

import { ApiClient, ApiError, FeedPage } from "./api.js"
import { fromConfigWire, toConfigWire, validate } from "./state.js"
import {
  appendAccountRow,
  readPanel,
  renderFilterChips,
  renderPosts,
  renderWarnings,
  setEmptyState,
  setRanOutBanner,
  setSignedOut,
  showErrors,
  syncStopLabel,
  writePanel,
} from "./view.js"

export interface Controller {
  start(): Promise<void>
  apply(): Promise<void>
  showMore(): Promise<void>
}

interface ControllerOptions {
  navigate?: (url: string) => void
}

export function createController(
  root: ParentNode,
  api: ApiClient,
  options: ControllerOptions = {},
): Controller {
  const navigate =
    options.navigate ??
    ((url: string) => {
      ;(root as Document).defaultView!.location.href = url
    })
  let feedAbort: AbortController | null = null

  function find<T extends Element>(selector: string): T {
    const el = root.querySelector(selector)
    if (!el) throw new Error(`missing element: ${selector}`)
    return el as T
  }

  function renderPage(page: FeedPage, mode: "replace" | "append"): void {
    renderPosts(root, page.posts, mode)
    setRanOutBanner(root, page.ran_out)
    renderWarnings(root, page.warnings)
    const list = find<HTMLElement>("#feed-list")
    setEmptyState(root, !page.ran_out && list.children.length === 0)
  }

  async function fetchPage(firstPage: boolean): Promise<FeedPage | null> {
    feedAbort?.abort()
    const abort = new AbortController()
    feedAbort = abort
    try {
      const page = await api.getFeed(firstPage, abort.signal)
      return feedAbort === abort ? page : null
    } catch (error) {
      if (abort.signal.aborted) return null // superseded by a newer request
      throw error
    } finally {
      if (feedAbort === abort) feedAbort = null
    }
  }

  async function handleApiError(error: unknown): Promise<void> {
    if (error instanceof ApiError && error.signedOut) {
      setSignedOut(root, true)
      return
    }
    if (error instanceof ApiError) {
      showErrors(root, [error.detail])
      return
    }
    throw error
  }

  const controller: Controller = {
    async start() {
      try {
        writePanel(root, fromConfigWire(await api.getConfig()))
        setSignedOut(root, false)
        const page = await fetchPage(true)
        if (page) renderPage(page, "replace")
      } catch (error) {
        await handleApiError(error)
      }
    },

    async apply() {
      const state = readPanel(root)
      const errors = validate(state)
      showErrors(root, errors)
      if (errors.length > 0) return
      try {
        await api.putConfig(toConfigWire(state))
        const page = await fetchPage(true)
        if (page) renderPage(page, "replace")
      } catch (error) {
        await handleApiError(error)
      }
    },

    async showMore() {
      if (feedAbort) return // one request at a time; only Apply preempts
      try {
        const page = await fetchPage(false)
        if (page) renderPage(page, "append")
      } catch (error) {
        await handleApiError(error)
      }
    },
  }

  find<HTMLElement>("#apply").addEventListener("click", () => {
    void controller.apply()
  })
  find<HTMLElement>("#show-more").addEventListener("click", () => {
    void controller.showMore()
  })
  find<HTMLElement>("#add-account").addEventListener("click", () => {
    appendAccountRow(root)
  })
  find<HTMLElement>("#add-filter").addEventListener("click", () => {
    const input = find<HTMLInputElement>("#filter-input")
    const phrase = input.value.trim()
    if (!phrase) return
    const current = readPanel(root).filters
    if (!current.includes(phrase)) renderFilterChips(root, [...current, phrase])
    input.value = ""
  })
  for (const name of ["following", "local", "trending"]) {
    find<HTMLInputElement>(`#slider-${name}`).addEventListener("input", () => {
      syncStopLabel(root, name)
    })
  }
  find<HTMLElement>("#signin-button").addEventListener("click", () => {
    const instance = find<HTMLInputElement>("#instance-input").value.trim()
    if (instance) navigate(api.loginUrl(instance))
  })

  return controller
}

// Browser entry point; inert under tests, which build their own document.
declare const document: Document | undefined
if (typeof document !== "undefined" && document.querySelector("#curation")) {
  const controller = createController(document, new ApiClient())
  void controller.start()
}
