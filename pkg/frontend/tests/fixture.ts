/**
 * Ten-pair task fixture.
 *
 * lemma_freq strictly decreases along the list, so the service queue
 * order (frequent lemmas first, then closer candidates, then pair id)
 * equals the list order and scripted sessions see p00 through p09 in
 * sequence.
 */

import type { TaskView } from "../src/api.js";

export const TEN_PAIRS: TaskView[] = [
  {
    pair_id: "p00",
    lemma: "dazwischen",
    pos_max: "ADV",
    lemma_freq: 1000,
    term: "dozwischn",
    distance: 3,
    contexts: ["Und dozwischn liegt da Berg.", "Es passt nix dozwischn."],
  },
  {
    pair_id: "p01",
    lemma: "zweisprachig",
    pos_max: "ADJ",
    lemma_freq: 990,
    term: "zwaasprochig",
    distance: 4,
    contexts: ["De Kinda san zwaasprochig aufgwochsn."],
  },
  {
    pair_id: "p02",
    lemma: "erwischen",
    pos_max: "VERB",
    lemma_freq: 980,
    term: "dawischn",
    distance: 3,
    contexts: ["Den hod da Regn dawischn."],
  },
  {
    pair_id: "p03",
    lemma: "Haus",
    pos_max: "NOUN",
    lemma_freq: 970,
    term: "Haisl",
    distance: 3,
    contexts: ["Des Haisl steht am Waldrand.", "A kloans Haisl mit Gartn."],
  },
  {
    pair_id: "p04",
    lemma: "sprechen",
    pos_max: "VERB",
    lemma_freq: 960,
    term: "redn",
    distance: 5,
    contexts: ["Mia redn heit no drüber."],
  },
  {
    pair_id: "p05",
    lemma: "schauen",
    pos_max: "VERB",
    lemma_freq: 950,
    term: "schaung",
    distance: 2,
    contexts: ["Gemma schaung, obs no offn haum."],
  },
  {
    pair_id: "p06",
    lemma: "klein",
    pos_max: "ADJ",
    lemma_freq: 940,
    term: "kloan",
    distance: 2,
    contexts: ["A kloan Bua woar a no."],
  },
  {
    pair_id: "p07",
    lemma: "Mädchen",
    pos_max: "NOUN",
    lemma_freq: 930,
    term: "Madl",
    distance: 4,
    contexts: ["Des Madl singt im Chor."],
  },
  {
    pair_id: "p08",
    lemma: "gehen",
    pos_max: "VERB",
    lemma_freq: 920,
    term: "ganga",
    distance: 3,
    contexts: ["Mia san hoam ganga."],
  },
  {
    pair_id: "p09",
    lemma: "schön",
    pos_max: "ADJ",
    lemma_freq: 910,
    term: "schee",
    distance: 2,
    contexts: ["So schee woar da Obnd.", "Gonz schee koid heit."],
  },
];
