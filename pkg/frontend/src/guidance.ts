/** Labeling criteria shown beside every task so annotators stay aligned. */
export const GUIDANCE_TITLE = 'When is a video relevant?';

export const GUIDANCE_POINTS: string[] = [
  'Mark a video RELEVANT when its content could drive a concrete product ' +
    'decision: a problem or bug report, a review of a specific feature, a ' +
    'comparison against a competitor, or an explicit feature request.',
  'The main point of the video, or a substantial part of it (several ' +
    'detailed sentences), must discuss the product in an actionable way.',
  'For short videos whose entire content is only a few sentences, a single ' +
    'sentence is enough to mark it relevant, provided that sentence carries ' +
    'adequate detail to act on.',
  'Mark a video IRRELEVANT when it never engages with the product ' +
    'meaningfully: mere mentions, unboxings without judgments, mood or ' +
    'lifestyle content, and promotion without substance.',
];
