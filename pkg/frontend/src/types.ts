// Wire types for the structured records served by the answer engine.

export interface WordIntensity {
  surface: string;
  intensity: number;
}

export interface ResultEntry {
  sentenceId: string;
  page: string;
  words: WordIntensity[];
  score: number;
  proofCount: number;
  level: string;
}

export interface ResultRecord {
  question: string;
  level: string;
  results: ResultEntry[];
}

export interface PageWord {
  surface: string;
  start: number;
  end: number;
  intensity: number;
}

export interface PageSentence {
  sentenceId: string;
  start: number;
  end: number;
  words: PageWord[];
  score: number;
  proofCount: number;
  level: string;
}

export interface PageSection {
  name: string;
  text: string;
  sentences: PageSentence[];
}

export interface PageView {
  page: string;
  sections: PageSection[];
}
