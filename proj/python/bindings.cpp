#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <sstream>

#include "textcat/config.hpp"
#include "textcat/corpus.hpp"
#include "textcat/error.hpp"
#include "textcat/fixture.hpp"
#include "textcat/noise.hpp"
#include "textcat/pipeline.hpp"

namespace py = pybind11;
using namespace textcat;

namespace {

KeyValueConfig to_settings(const std::map<std::string, py::object>& settings) {
  KeyValueConfig kv;
  for (const auto& [key, value] : settings) {
    if (py::isinstance<py::bool_>(value)) {
      kv.set(key, value.cast<bool>() ? "true" : "false");
    } else if (py::isinstance<py::list>(value) || py::isinstance<py::tuple>(value)) {
      std::vector<std::string> items;
      for (const auto& item : value) items.push_back(py::str(item));
      kv.set_list(key, items);
    } else {
      kv.set(key, py::str(value));
    }
  }
  return kv;
}

LabeledCorpus make_corpus(const std::vector<std::tuple<std::string, std::string, std::string>>& docs) {
  std::vector<std::string> names;
  std::vector<Document> out;
  for (const auto& [id, text, label] : docs) {
    auto it = std::find(names.begin(), names.end(), label);
    if (it == names.end()) it = names.insert(names.end(), label);
    out.push_back({id, text, static_cast<std::size_t>(it - names.begin())});
  }
  return LabeledCorpus(std::move(out), std::move(names));
}

py::dict evaluation_dict(const EvaluationReport& r) {
  py::dict d;
  d["class_names"] = r.class_names;
  d["total"] = r.total;
  d["errors"] = r.errors;
  d["error_rate"] = r.error_rate();
  d["confusion"] = r.confusion;
  return d;
}

}  // namespace

PYBIND11_MODULE(_textcat, m) {
  m.doc() = "Corpus-adaptive text categorization";

  static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
  static py::exception<LoadError> load_error(m, "LoadError", input_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const LoadError& e) {
      py::set_error(load_error, e.what());
    } catch (const InputError& e) {
      py::set_error(input_error, e.what());
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical_error, e.what());
    }
  });

  m.def("tokenize", &tokenize, py::arg("text"), "Lowercased word forms with punctuation removed.");

  py::class_<LabeledCorpus>(m, "Corpus")
      .def(py::init(&make_corpus), py::arg("documents"),
           "Corpus from (id, text, class name) triples; classes are numbered by first appearance.")
      .def_static("load", [](const std::filesystem::path& p) { return load_corpus(p); }, py::arg("path"))
      .def("split", &split_corpus, py::arg("train_ratio"), py::arg("seed"))
      .def_property_readonly("class_names", &LabeledCorpus::class_names)
      .def_property_readonly("ids", [](const LabeledCorpus& c) {
        std::vector<std::string> out;
        for (const auto& d : c.documents()) out.push_back(d.id);
        return out;
      })
      .def_property_readonly("labels", [](const LabeledCorpus& c) {
        std::vector<std::string> out;
        for (const auto& d : c.documents()) out.push_back(c.class_names()[d.label]);
        return out;
      })
      .def("text", [](const LabeledCorpus& c, std::size_t i) { return c.documents().at(i).text; }, py::arg("index"))
      .def("__len__", &LabeledCorpus::size);

  m.def(
      "generate_fixture",
      [](std::size_t classes, std::size_t train_per_class, std::size_t test_per_class, std::uint64_t seed) {
        FixtureSpec spec;
        spec.classes = classes;
        spec.train_per_class = train_per_class;
        spec.test_per_class = test_per_class;
        spec.seed = seed;
        auto fx = generate_fixture(spec);
        return std::make_pair(std::move(fx.train), std::move(fx.test));
      },
      py::arg("classes") = 3, py::arg("train_per_class") = 100, py::arg("test_per_class") = 30,
      py::arg("seed") = 42, "Synthetic (train, test) corpora with planted class vocabularies.");

  m.def(
      "corrupt",
      [](const std::string& text, std::uint64_t seed) {
        const auto r = corrupt(text, NoiseModel::ocr_default(seed));
        return py::make_tuple(r.text, r.word_accuracy());
      },
      py::arg("text"), py::arg("seed") = 0, "Applies the default OCR noise model; returns (text, word accuracy).");

  m.def(
      "corrupt_corpus",
      [](const LabeledCorpus& corpus, std::uint64_t seed) {
        auto r = corrupt_corpus(corpus, NoiseModel::ocr_default(seed));
        return py::make_tuple(std::move(r.corpus), r.word_accuracy());
      },
      py::arg("corpus"), py::arg("seed") = 0);

  py::class_<ModelBundle>(m, "Model")
      .def_static(
          "train",
          [](const LabeledCorpus& corpus, const std::map<std::string, py::object>& settings) {
            const auto config = TrainConfig::from(to_settings(settings));
            py::gil_scoped_release release;
            return train(corpus, config);
          },
          py::arg("corpus"), py::arg("settings") = std::map<std::string, py::object>{},
          "Trains a bundle; settings use the configuration file keys.")
      .def_static("load", [](const std::filesystem::path& p) { return load_bundle(p); }, py::arg("path"))
      .def("save", [](const ModelBundle& b, const std::filesystem::path& p) { save_bundle(b, p); }, py::arg("path"))
      .def("dumps", [](const ModelBundle& b) {
        std::ostringstream os;
        save_bundle(b, os);
        return py::bytes(os.str());
      })
      .def(
          "classify",
          [](const ModelBundle& b, std::string_view text) {
            auto c = classify(b, text);
            return py::make_tuple(c.name, c.scores);
          },
          py::arg("text"), "Returns (class name, scores).")
      .def("evaluate", [](const ModelBundle& b, const LabeledCorpus& test) { return evaluation_dict(evaluate(b, test)); },
           py::arg("corpus"))
      .def_property_readonly("class_names", [](const ModelBundle& b) { return b.classifier.class_names; })
      .def_property_readonly("features", [](const ModelBundle& b) {
        std::vector<std::string> out;
        for (const auto& e : b.features.entries()) out.push_back(e.feature);
        return out;
      })
      .def_property_readonly("stop_words", [](const ModelBundle& b) { return b.stop.words; })
      .def_property_readonly("lprime", [](const ModelBundle& b) { return b.projection.output_dim(); });

  m.def(
      "sweep",
      [](const LabeledCorpus& train_corpus, const LabeledCorpus& test_corpus, const std::vector<std::size_t>& lprimes,
         const std::vector<std::string>& features, const std::map<std::string, py::object>& settings) {
        const auto config = TrainConfig::from(to_settings(settings));
        std::vector<FeatureKind> kinds;
        for (const auto& f : features) kinds.push_back(parse_feature_kind(f));
        SweepTable table;
        {
          py::gil_scoped_release release;
          table = sweep(train_corpus, test_corpus, config, lprimes, kinds);
        }
        py::dict out;
        for (std::size_t c = 0; c < kinds.size(); ++c) {
          std::vector<std::optional<double>> column;
          for (const auto& row : table.cells) column.push_back(row[c]);
          out[py::str(features[c])] = column;
        }
        return out;
      },
      py::arg("train"), py::arg("test"), py::arg("lprimes") = std::vector<std::size_t>{50, 100, 200, 500},
      py::arg("features") = std::vector<std::string>{"trigram", "learned"},
      py::arg("settings") = std::map<std::string, py::object>{},
      "Test error rates per feature set, one entry per L' (None where L' is infeasible).");
}
