/** Explorer session state, serializable into the URL hash so any view
 * can be shared as a link. */

export interface DiagramConfig {
  x: string;
  y: string;
  s: number;
  selectedIndex: number;
}

export interface ExplorerSession {
  datasetId?: string;
  goldId?: string;
  experimentIds: string[];
  view: "venn" | "diagram" | "pairs" | "kpi" | "ratios";
  expression?: { include: string[]; exclude: string[]; pairMode: string };
  strategy?: string;
  diagram: DiagramConfig;
}

export function defaultSession(): ExplorerSession {
  return {
    experimentIds: [],
    view: "venn",
    diagram: { x: "recall", y: "precision", s: 10, selectedIndex: 0 },
  };
}

export function encodeSession(session: ExplorerSession): string {
  return encodeURIComponent(JSON.stringify(session));
}

export function decodeSession(hash: string): ExplorerSession {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  if (!raw) return defaultSession();
  try {
    const parsed = JSON.parse(decodeURIComponent(raw));
    return { ...defaultSession(), ...parsed };
  } catch {
    return defaultSession();
  }
}

export function pushSession(session: ExplorerSession): void {
  window.history.replaceState(null, "", `#${encodeSession(session)}`);
}
