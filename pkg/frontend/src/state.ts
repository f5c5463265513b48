// Slider-panel state and its mapping onto the service config wire format.

export type Stop = "none" | "low" | "medium" | "high"
export type OrderingMode = "weighted_interleave" | "strict_priority"

export const STOPS: readonly Stop[] = ["none", "low", "medium", "high"]

export const STOP_LABELS: Record<Stop, string> = {
  none: "None",
  low: "Low Priority",
  medium: "Medium Priority",
  high: "High Priority",
}

export interface AccountRow {
  handle: string
  level: Stop
}

export interface SliderState {
  following: Stop
  local: Stop
  trending: Stop
  accounts: AccountRow[]
  filters: string[]
  orderingMode: OrderingMode
}

export interface ConfigWire {
  priorities: { following: string; local: string; trending: string }
  accounts: { handle: string; level: string }[]
  filters: string[]
  ordering_mode: string
}

export function defaultState(): SliderState {
  return {
    following: "high",
    local: "low",
    trending: "low",
    accounts: [],
    filters: [],
    orderingMode: "weighted_interleave",
  }
}

export function stopIndex(stop: Stop): number {
  return STOPS.indexOf(stop)
}

export function stopFromIndex(index: number): Stop {
  const stop = STOPS[index]
  if (stop === undefined) throw new Error(`no slider stop at ${index}`)
  return stop
}

function asStop(raw: string): Stop {
  if ((STOPS as string[]).includes(raw)) return raw as Stop
  throw new Error(`unknown priority level: ${raw}`)
}

function normalizedHandle(raw: string): string {
  const trimmed = raw.trim()
  return (trimmed.startsWith("@") ? trimmed.slice(1) : trimmed).toLowerCase()
}

/** Rows with an empty handle are placeholders the user never filled in. */
export function filledAccounts(state: SliderState): AccountRow[] {
  return state.accounts.filter(row => row.handle.trim() !== "")
}

export function validate(state: SliderState): string[] {
  const errors: string[] = []
  const seen = new Set<string>()
  for (const row of filledAccounts(state)) {
    const key = normalizedHandle(row.handle)
    if (seen.has(key)) errors.push(`duplicate account: ${row.handle.trim()}`)
    seen.add(key)
  }
  return errors
}

export function toConfigWire(state: SliderState): ConfigWire {
  return {
    priorities: {
      following: state.following,
      local: state.local,
      trending: state.trending,
    },
    accounts: filledAccounts(state).map(row => ({
      handle: row.handle.trim(),
      level: row.level,
    })),
    filters: state.filters.slice(),
    ordering_mode: state.orderingMode,
  }
}

export function fromConfigWire(wire: ConfigWire): SliderState {
  if (
    wire.ordering_mode !== "weighted_interleave" &&
    wire.ordering_mode !== "strict_priority"
  ) {
    throw new Error(`unknown ordering mode: ${wire.ordering_mode}`)
  }
  return {
    following: asStop(wire.priorities.following),
    local: asStop(wire.priorities.local),
    trending: asStop(wire.priorities.trending),
    accounts: wire.accounts.map(row => ({
      handle: row.handle,
      level: asStop(row.level),
    })),
    filters: wire.filters.slice(),
    orderingMode: wire.ordering_mode,
  }
}
