#include "famicom/complexity.hpp"

namespace famicom {

// Built-in prompt templates. assets/templates/*.json ship the same content;
// a test keeps the two in sync.

namespace {

const char* kDirectJson = R"JSON(
{
  "kind": "direct",
  "preamble": "How many steps does it takes to solve the problem.",
  "exemplars": []
}
)JSON";

const char* kGuidedJson = R"JSON(
{
  "kind": "guided",
  "preamble": "How many steps does it takes to solve the problem. Count the reasoning steps as in the examples and finish with the total.",
  "exemplars": [
    {
      "question": "Which is heavier: a kilogram of feathers or a kilogram of iron? Options: (A) They weigh the same (B) The iron",
      "worked": "Step 1: Both amounts are one kilogram, so they weigh the same.",
      "count": 1
    },
    {
      "question": "A train leaves at 9:40 and arrives at 11:10. How many minutes does the trip take? Options: (A) 90 (B) 110",
      "worked": "Step 1: From 9:40 to 10:40 is 60 minutes.\nStep 2: From 10:40 to 11:10 is 30 more minutes, so the trip takes 90 minutes.",
      "count": 2
    },
    {
      "question": "Is the sum of the first four odd numbers a perfect square? Options: (A) Yes (B) No",
      "worked": "Step 1: The first four odd numbers are 1, 3, 5, 7.\nStep 2: Their sum is 1 + 3 + 5 + 7 = 16.\nStep 3: 16 equals 4 times 4.\nStep 4: So the sum is a perfect square.",
      "count": 4
    },
    {
      "question": "Anna has twice as many apples as Ben and together they have 18. After Anna gives Ben 2 apples, who has more? Options: (A) Anna (B) Ben",
      "worked": "Step 1: Let Ben have x apples.\nStep 2: Then Anna has 2x apples.\nStep 3: 3x = 18, so x = 6.\nStep 4: Anna has 12 and Ben has 6.\nStep 5: After the transfer Anna has 10 and Ben has 8.\nStep 6: Anna still has more.",
      "count": 6
    }
  ]
}
)JSON";

const char* kOperationalJson = R"JSON(
{
  "kind": "operational",
  "preamble": "Estimate how many atomic operations a sequence program needs to answer the question. Use only these operations: select, aggregate, selector_width, map, seq_map, full, indices, tokens, shift_right, kqv, where, sort, cumsum. Use named constants instead of numbers. Reply with the program in a triple-backtick code block.",
  "exemplars": [
    {
      "question": "How many times does each token repeat in the input?",
      "worked": "same = select(tokens, tokens, equal)\nrepeats = selector_width(same)",
      "count": 2
    },
    {
      "question": "What is the last token of the input?",
      "worked": "last = aggregate(select(indices(), full(max_index), equal), tokens)",
      "count": 4
    },
    {
      "question": "Reverse the input sequence.",
      "worked": "pos = indices()\nflipped = map(negate, pos)\nrev = sort(tokens, flipped)",
      "count": 3
    }
  ]
}
)JSON";

}  // namespace

const ComplexityPromptTemplate& builtin_template(ComplexityMethod kind) {
    static const ComplexityPromptTemplate direct = ComplexityPromptTemplate::from_json_text(kDirectJson);
    static const ComplexityPromptTemplate guided = ComplexityPromptTemplate::from_json_text(kGuidedJson);
    static const ComplexityPromptTemplate operational =
        ComplexityPromptTemplate::from_json_text(kOperationalJson);
    switch (kind) {
        case ComplexityMethod::Direct: return direct;
        case ComplexityMethod::Guided: return guided;
        case ComplexityMethod::Operational: return operational;
    }
    return direct;
}

}  // namespace famicom
