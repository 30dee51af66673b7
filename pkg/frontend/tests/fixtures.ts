// Wire documents captured verbatim from a live service run on the bundled
// noisy fixture pair (session config: matchers name, cosine, pearson).

import type { AggregateSeries, ProjectDocument, SessionView } from "../src/api.js";

export const SESSION_VIEW: SessionView = {
  "session": "60c83aa5bbe6",
  "source": "9e33ae8b743f",
  "target": "2cc2d6406741",
  "config": {
    "matchers": [
      "name",
      "cosine",
      "pearson"
    ],
    "threshold": 0.5,
    "k": 5,
    "provider": null
  },
  "pairs": [
    {
      "source": 3,
      "target": 3,
      "scores": {
        "name": 1.0,
        "cosine": "skipped",
        "pearson": "skipped"
      },
      "combined": 1.0,
      "status": "pending",
      "added": false
    },
    {
      "source": 1,
      "target": 1,
      "scores": {
        "name": "skipped",
        "cosine": 0.9992719640770482,
        "pearson": 0.9983772903640779
      },
      "combined": 0.998824627220563,
      "status": "pending",
      "added": false
    },
    {
      "source": 0,
      "target": 0,
      "scores": {
        "name": 0.5833333333333333,
        "cosine": 0.9600448925563172,
        "pearson": 0.9527639875971067
      },
      "combined": 0.8320474044955857,
      "status": "pending",
      "added": false
    },
    {
      "source": 2,
      "target": 2,
      "scores": {
        "name": 0.25,
        "cosine": 0.712462817866933,
        "pearson": 0.5864263190591328
      },
      "combined": 0.5162963789753553,
      "status": "pending",
      "added": false
    }
  ],
  "mapping": [
    [
      3,
      3
    ],
    [
      1,
      1
    ],
    [
      0,
      0
    ],
    [
      2,
      2
    ]
  ],
  "decisions": [],
  "merged_project": null
};

export const SOURCE_PROJECT: ProjectDocument = {
  "project": "9e33ae8b743f",
  "name": "expenses-2011",
  "headers": [
    "Airport Code",
    null,
    "Organization",
    "Cost"
  ],
  "kinds": [
    "text",
    "text",
    "text",
    "numeric"
  ],
  "rows": [
    [
      "LHR",
      "England",
      "Microsoft",
      "123.2"
    ],
    [
      "LGA",
      "United States",
      "Apple",
      "232.12"
    ],
    [
      "HUU",
      "Peru",
      "Orange",
      "321.7"
    ],
    [
      "DBO",
      "Australia",
      "IBM",
      "354.64"
    ],
    [
      "BGY",
      "Italy",
      "Accenture",
      "243.8"
    ]
  ]
};

export const TARGET_PROJECT: ProjectDocument = {
  "project": "2cc2d6406741",
  "name": "expenses-2012",
  "headers": [
    "Airport",
    "Pays",
    "OR_Idx",
    "Cost"
  ],
  "kinds": [
    "text",
    "text",
    "text",
    "numeric"
  ],
  "rows": [
    [
      "LaGuardia",
      "Estados Unidos",
      "MS",
      "201.41"
    ],
    [
      "Heathrow",
      "Angleterre",
      "Yahoo",
      "90.5"
    ],
    [
      "Queen Alia",
      "الأردن",
      "Samsung",
      "198"
    ],
    [
      "Prestwick",
      "Scozia",
      "GOOG",
      "211.27"
    ],
    [
      "Beauvais",
      "Frankreich",
      "HP",
      "55.99"
    ]
  ]
};

export const MERGED_PROJECT: ProjectDocument = {
  "project": "e506ff1fc4c1",
  "name": "expenses-2011+expenses-2012",
  "headers": [
    "Airport Code",
    null,
    "Organization",
    "Cost",
    "Airport"
  ],
  "kinds": [
    "text",
    "text",
    "text",
    "numeric",
    "text"
  ],
  "rows": [
    [
      "LHR",
      "England",
      "Microsoft",
      "123.2",
      ""
    ],
    [
      "LGA",
      "United States",
      "Apple",
      "232.12",
      ""
    ],
    [
      "HUU",
      "Peru",
      "Orange",
      "321.7",
      ""
    ],
    [
      "DBO",
      "Australia",
      "IBM",
      "354.64",
      ""
    ],
    [
      "BGY",
      "Italy",
      "Accenture",
      "243.8",
      ""
    ],
    [
      "",
      "Estados Unidos",
      "MS",
      "201.41",
      "LaGuardia"
    ],
    [
      "",
      "Angleterre",
      "Yahoo",
      "90.5",
      "Heathrow"
    ],
    [
      "",
      "الأردن",
      "Samsung",
      "198",
      "Queen Alia"
    ],
    [
      "",
      "Scozia",
      "GOOG",
      "211.27",
      "Prestwick"
    ],
    [
      "",
      "Frankreich",
      "HP",
      "55.99",
      "Beauvais"
    ]
  ]
};

export const AGGREGATE_SUM: AggregateSeries = {
  "series": [
    {
      "key": "Accenture",
      "value": 243.8
    },
    {
      "key": "Apple",
      "value": 232.12
    },
    {
      "key": "GOOG",
      "value": 211.27
    },
    {
      "key": "HP",
      "value": 55.99
    },
    {
      "key": "IBM",
      "value": 354.64
    },
    {
      "key": "MS",
      "value": 201.41
    },
    {
      "key": "Microsoft",
      "value": 123.2
    },
    {
      "key": "Orange",
      "value": 321.7
    },
    {
      "key": "Samsung",
      "value": 198.0
    },
    {
      "key": "Yahoo",
      "value": 90.5
    }
  ]
};
