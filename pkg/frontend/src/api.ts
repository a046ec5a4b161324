/** Typed client for the matcheval HTTP API. The explorer performs no
 * metric computation of its own: every displayed number comes from one
 * of these responses. */

export interface ConfusionMatrix {
  tp: number;
  fp: number;
  fn: number;
  tn: number;
}

export interface MetricValue {
  name: string;
  value: number | null;
  definedOn: string[];
  readsTrueNegatives: boolean;
}

export interface DatasetInfo {
  id: string;
  name: string;
  attributeNames: string[];
  recordCount: number;
}

export interface GoldInfo {
  id: string;
  name: string;
  datasetId: string;
  clusterCount: number;
  pairCount: number;
}

export interface ExperimentInfo {
  id: string;
  name: string;
  datasetId: string;
  solutionId: string | null;
  matchCount: number;
  decisionThreshold: number | null;
}

export interface SetExpressionBody {
  include: string[];
  exclude: string[];
  pairMode: string;
}

export interface VennRegion {
  members: number[];
  count: number;
  expression: SetExpressionBody;
}

export interface VennResponse {
  sources: string[];
  regions: VennRegion[];
}

export interface PairView {
  pair: [number, number];
  nativeIds: [string, string];
  records: (string | null)[][];
  similarity: number | null;
  labels: Record<string, boolean>;
  classification: string | null;
}

export interface Page<T> {
  total: number;
  page: number;
  pageSize: number;
  pages: number;
  items: T[];
}

export interface DiagramPoint {
  x: number | null;
  y: number | null;
  threshold: number | null;
  matrix: ConfusionMatrix;
}

export interface DiagramResponse {
  xMetric: string;
  yMetric: string;
  points: DiagramPoint[];
}

export interface EffortPoint {
  effortHours: number;
  value: number | null;
  experimentId: string;
  experimentName: string;
}

export interface EffortSeries {
  solutionId: string | null;
  points: EffortPoint[];
}

export interface AttributeRatio {
  attribute: string;
  ratio: number | null;
  falseCount: number;
  totalCount: number;
}

export interface MetricsResponse {
  confusion: ConfusionMatrix;
  pairMetrics: MetricValue[];
  clusterMetrics: MetricValue[];
  closureDeficiency: number;
}

export interface DecisionRow {
  solutionId: string;
  solutionName: string;
  generalCosts: number | null;
  effortCosts: Record<string, number | null>;
  deploymentType: string[];
  interfaces: string[];
  techniques: string[];
  bestExperimentId: string | null;
  setupEffortCost: number | null;
  runtimeSeconds: number | null;
  metrics: Record<string, number | null>;
}

export interface ExplainResponse {
  counterpart: PairView;
  score: number;
}

export interface SetRequest {
  datasetId: string;
  expression: SetExpressionBody;
  page?: number;
  pageSize?: number;
  sortKey?: string;
  sortDescending?: boolean;
}

export interface SelectRequest {
  datasetId: string;
  experimentId: string;
  goldId?: string;
  strategy: string;
  k?: number;
  threshold?: number;
  proportion?: number;
  side?: string;
  partitions?: number;
  perPartition?: number;
  sampler?: string;
  seed?: number;
}

export interface PartitionSummary {
  low: number;
  high: number;
  size: number;
  matrix: ConfusionMatrix;
  representatives: PairView[];
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

async function parseError(response: Response): Promise<never> {
  let code = "Error";
  let message = `${response.status}`;
  try {
    const body = await response.json();
    code = body.code ?? code;
    message = body.message ?? message;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async get<T>(path: string, params?: Record<string, unknown>): Promise<T> {
    const query = params
      ? "?" +
        Object.entries(params)
          .filter(([, v]) => v !== undefined && v !== null)
          .map(([k, v]) => `${encodeURIComponent(k)}=${encodeURIComponent(String(v))}`)
          .join("&")
      : "";
    const response = await fetch(`${this.baseUrl}${path}${query}`);
    if (!response.ok) await parseError(response);
    return response.json();
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await parseError(response);
    return response.json();
  }

  listDatasets(): Promise<DatasetInfo[]> {
    return this.get("/datasets");
  }

  listGoldStandards(): Promise<GoldInfo[]> {
    return this.get("/goldstandards");
  }

  listExperiments(): Promise<ExperimentInfo[]> {
    return this.get("/experiments");
  }

  venn(datasetId: string, sources: string[], pairMode = "closure"): Promise<VennResponse> {
    return this.post("/evaluate/venn", { datasetId, sources, pairMode });
  }

  evaluateSet(request: SetRequest): Promise<Page<PairView>> {
    return this.post("/evaluate/set", request);
  }

  diagram(
    experimentId: string,
    goldId: string,
    x: string,
    y: string,
    s: number,
  ): Promise<DiagramResponse> {
    return this.get("/evaluate/diagram", { experimentId, goldId, x, y, s });
  }

  effortDiagram(goldId: string, metric: string, runningMax: boolean): Promise<EffortSeries[]> {
    return this.get("/evaluate/effort-diagram", { goldId, metric, runningMax });
  }

  metrics(experimentId: string, goldId: string): Promise<MetricsResponse> {
    return this.get("/evaluate/metrics", { experimentId, goldId });
  }

  select(request: SelectRequest): Promise<{ strategy: string; pairs?: PairView[]; partitions?: PartitionSummary[] }> {
    return this.post("/evaluate/select", request);
  }

  explainError(
    datasetId: string,
    experimentId: string,
    goldId: string,
    pair: [number, number],
    q = 2.0,
  ): Promise<ExplainResponse> {
    return this.post("/evaluate/explain-error", { datasetId, experimentId, goldId, pair, q });
  }

  nullRatio(experimentId: string, goldId: string, universe = "union"): Promise<AttributeRatio[]> {
    return this.get("/evaluate/null-ratio", { experimentId, goldId, universe });
  }

  equalRatio(experimentId: string, goldId: string, universe = "union"): Promise<AttributeRatio[]> {
    return this.get("/evaluate/equal-ratio", { experimentId, goldId, universe });
  }

  decisionMatrix(goldId?: string, metrics?: string[]): Promise<{ rows: DecisionRow[] }> {
    return this.post("/kpi/decision-matrix", {
      goldId,
      metrics: metrics ?? ["precision", "recall", "f1"],
    });
  }

  aggregate(
    goldId: string | undefined,
    terms: { source: string; weight: number }[],
  ): Promise<{ scores: { solutionId: string; solutionName: string; score: number }[] }> {
    return this.post("/kpi/aggregate", { goldId, terms });
  }
}
