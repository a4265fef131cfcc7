export interface FragmentView {
  text: string;
  path: string | null;
  start_line: number;
}

export interface PredictionView {
  prob_true: number;
  prob_false: number;
  decision: string;
}

export interface QueueItem {
  pair_id: string;
  detector: string | null;
  fragment1: FragmentView;
  fragment2: FragmentView;
  features: Record<string, number> | null;
  prediction: PredictionView | null;
}

export interface QueuePage {
  items: QueueItem[];
  page: number;
  page_size: number;
  total: number;
  total_pages: number;
  gamma_default: number;
}

export interface TrainResult {
  rows?: number;
  model?: string;
  cv_mean_accuracy?: number;
  cv_mean_f1?: number;
  k?: number;
  served_model?: string;
}

export interface TrainStatus {
  running: boolean;
  last: TrainResult | null;
}

export type CloneLabel = "TP" | "FP";
