// Thin typed client for the curation service JSON endpoints.

import type { ConfigWire } from "./state.js"

export interface FeedPost {
  id: string
  author: string
  created_at: string
  html: string
  badge: string
  source: string
  boost_of: string | null
}

export interface SourceWarning {
  source: string
  message: string
}

export interface FeedPage {
  posts: FeedPost[]
  ran_out: boolean
  seed: number
  warnings: SourceWarning[]
}

export interface PutConfigResult {
  ok: boolean
  unresolved: string[]
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`${status}: ${detail}`)
  }

  get signedOut(): boolean {
    return this.status === 401
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async getConfig(): Promise<ConfigWire> {
    return this.request("GET", "/api/v1/config")
  }

  async putConfig(config: ConfigWire): Promise<PutConfigResult> {
    return this.request("PUT", "/api/v1/config", {
      body: JSON.stringify(config),
      headers: { "content-type": "application/json" },
    })
  }

  async getFeed(firstPage: boolean, signal?: AbortSignal): Promise<FeedPage> {
    const query = firstPage ? "first_page=true" : "first_page=false"
    return this.request("GET", `/api/v1/feed?${query}`, { signal })
  }

  loginUrl(instance: string): string {
    return `${this.base}/api/v1/auth/login?instance=${encodeURIComponent(instance)}`
  }

  private async request(
    method: string,
    path: string,
    init: RequestInit = {},
  ): Promise<any> {
    const response = await this.fetchImpl(this.base + path, { method, ...init })
    if (!response.ok) {
      let detail = response.statusText
      try {
        const body = await response.json()
        if (typeof body.detail === "string") detail = body.detail
        else if (body.detail) detail = JSON.stringify(body.detail)
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail)
    }
    return response.json()
  }
}
