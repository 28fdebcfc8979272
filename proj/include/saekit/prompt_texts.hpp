#pragma once

#include <string_view>

namespace saekit::prompts {

// Template texts, kept byte-identical to the files under prompts/ (a unit
// test enforces the equivalence). {placeholders} are filled by the builders
// in autointerp.hpp.

inline constexpr std::string_view kInterpreterSystemTemplate = R"__SAEKIT(You are a meticulous AI researcher conducting an important investigation into a certain neuron in a language model. Your task is to analyze the neuron and explain what causes the neuron to activate.
{prompt}
Guidelines:
You will be given a list of text examples on which the neuron activates. The specific tokens which cause the neuron to activate will appear between delimiters like <<this>>. If a sequence of consecutive tokens all cause the neuron to activate, the entire sequence of tokens will be contained between delimiters <<just like this>>.
- You must produce a concise final description. Simply describe the text features that activate the neuron, and what its role might be based on the tokens it predicts.
- The last line of your response must be the formatted explanation.
- Think carefully about the patterns in the text examples and the tokens that activate the neuron. Pay attention to detail.
{subject_specific_instructions})__SAEKIT";

inline constexpr std::string_view kInterpreterExampleBlock = R"__SAEKIT(
Example 1:  and he was <<over the moon>> to find
Example 2:  we'll be laughing <<till the cows come home>>! Pro
Example 3:  thought Scotland was boring, but really there's more 
<<than meets the eye>>! I'd
)__SAEKIT";

inline constexpr std::string_view kInterpreterExampleExplanation = R"__SAEKIT(
[EXPLANATION]: Common idioms in text conveying positive sentiment.
)__SAEKIT";

inline constexpr std::string_view kPredictorSystemPrompt = R"__SAEKIT(You are an intelligent and
meticulous linguistics researcher.
You will be given a certain feature of text, such as
"male pronouns" or "text with negative sentiment".
You will then be given several text examples. Your task
is to determine which examples possess the feature.
For each example in turn, return 1 if the sentence is
correctly labeled or 0 if the tokens are mislabeled. You
must return your response in a valid Python list. Do not
return anything else besides a Python list.
)__SAEKIT";

inline constexpr std::string_view kAggregationTemplate = R"__SAEKIT(You are an AI assistant tasked with unifying multiple explanations for a single feature in a language
model. These features are from the TinyStories dataset, which consists of short stories using simple 
vocabulary. Your goal is to create a concise explanation that captures the essence of all the
individual explanations.

Individual explanations:
{explanations}

Please provide a unified explanation that:
1. Provides a clear and concise description of the feature's function or role in the context of the
TinyStories dataset and the language model. Include 2-3 brief examples of how this feature 
might manifest in the stories.)__SAEKIT";

inline constexpr std::string_view kDiversityTemplate = R"__SAEKIT(You are an AI assistant tasked with unifying multiple explanations for a single feature in a language
model. These features are from the TinyStories dataset, which consists of short stories using simple
vocabulary. Your goal is to create a concise explanation that captures the essence of all the 
individual explanations.

Individual explanations:
{explanations}

Please provide a unified explanation that:
1. Provides a clear and concise description of the feature's function or role in the context of the 
TinyStories dataset and the language model. Include 2-3 brief examples of how this feature might
manifest in the stories.
2. Scores the diversity of the feature's activations on a scale of 1 to 100, where:
   - 1-20: Very low diversity (e.g., a specific feature that only activates for a specific character
   name like "Tom")
   - 21-40: Low diversity (e.g., a less generic feature that activates for different character names, 
   but only names)
   - 41-60: Moderate diversity (e.g., a generic feature that activates for various types of objects 
   found in a home)
   - 61-80: High diversity (e.g., a generic feature that activates for different types of actions, both
   physical and verbal)
   - 81-100: Very high diversity (e.g., a generic feature that activates across various story elements: 
   characters, actions, settings, emotions, dialogue)
Note: Consider the full range of possibilities within the TinyStories dataset. Don't hesitate to use
the full scale from 1 to 100 based on your analysis even if they all pertain to children's stories
since this is the dataset we are evaluating.

Unified explanation:
[Your unified explanation with 2-3 examples]

Diversity Score: [1-100]
Justification:[Brief justification for the score, considering the context of the TinyStories dataset])__SAEKIT";

}  // namespace saekit::prompts
