#pragma once

#include <string>

#include "json.hpp"
#include "tokencore/corpus.hpp"
#include "tokencore/errors.hpp"

namespace tokencore::detail {

using nlohmann::json;

inline json document_to_json(const Document& doc) {
  json j;
  j["doc_id"] = doc.doc_id;
  json words = json::array();
  bool any_word_label = false;
  for (const auto& w : doc.words) {
    words.push_back(w.text);
    any_word_label = any_word_label || w.label.has_value();
  }
  j["words"] = std::move(words);
  if (doc.label) j["label"] = to_int(*doc.label);
  if (any_word_label) {
    json labels = json::array();
    for (const auto& w : doc.words) {
      if (w.label) {
        labels.push_back(to_int(*w.label));
      } else {
        labels.push_back(nullptr);
      }
    }
    j["word_labels"] = std::move(labels);
  }
  return j;
}

inline std::optional<Label> optional_label(const json& value, const std::string& where) {
  if (value.is_null()) return std::nullopt;
  if (!value.is_number_integer()) throw SchemaError(where + ": label must be 0 or 1");
  return label_from_int(value.get<long long>());
}

inline Document document_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected a JSON object");
  Document doc;
  if (!j.contains("doc_id") || !j["doc_id"].is_string()) {
    throw SchemaError(where + ": missing string field 'doc_id'");
  }
  doc.doc_id = j["doc_id"].get<std::string>();
  if (j.contains("words")) {
    if (!j["words"].is_array()) throw SchemaError(where + ": 'words' must be an array");
    for (const auto& w : j["words"]) {
      if (!w.is_string()) throw SchemaError(where + ": words must be strings");
      doc.words.push_back({w.get<std::string>(), std::nullopt});
    }
  } else if (j.contains("text") && j["text"].is_string()) {
    doc.words = split_words(j["text"].get<std::string>());
  } else {
    throw SchemaError(where + ": missing 'words' array");
  }
  if (j.contains("label")) doc.label = optional_label(j["label"], where);
  if (j.contains("word_labels") && !j["word_labels"].is_null()) {
    const auto& labels = j["word_labels"];
    if (!labels.is_array() || labels.size() != doc.words.size()) {
      throw SchemaError(where + ": 'word_labels' must match 'words' in length");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
      doc.words[i].label = optional_label(labels[i], where);
    }
  }
  return doc;
}

}  // namespace tokencore::detail
