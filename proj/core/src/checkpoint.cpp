#include "qxai/nnet/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

namespace qxai::nnet {

namespace {

std::string act_name(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::leaky_relu: return "leaky_relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::softmax: return "softmax";
  }
  return "identity";
}

Activation act_from(const std::string& s) {
  if (s == "identity") return Activation::identity;
  if (s == "relu") return Activation::relu;
  if (s == "leaky_relu") return Activation::leaky_relu;
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "softmax") return Activation::softmax;
  throw IoError("checkpoint: unknown activation '" + s + "'");
}

std::string loss_name(Loss l) {
  return l == Loss::mae ? "mean_absolute_error" : "binary_crossentropy";
}

Loss loss_from(const std::string& s) {
  if (s == "mean_absolute_error") return Loss::mae;
  if (s == "binary_crossentropy") return Loss::bce;
  throw IoError("checkpoint: unknown loss '" + s + "'");
}

nlohmann::json train_to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"loss", loss_name(c.loss)},
          {"seed", c.seed},
          {"adam",
           {{"lr", c.adam.lr},
            {"beta1", c.adam.beta1},
            {"beta2", c.adam.beta2},
            {"eps", c.adam.eps}}}};
}

TrainConfig train_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.epochs = j.at("epochs").get<std::size_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.loss = loss_from(j.at("loss").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  const auto& a = j.at("adam");
  c.adam.lr = a.at("lr").get<double>();
  c.adam.beta1 = a.at("beta1").get<double>();
  c.adam.beta2 = a.at("beta2").get<double>();
  c.adam.eps = a.at("eps").get<double>();
  return c;
}

}  // namespace

Predictor Checkpoint::predictor() const {
  if (is_attention()) return make_predictor(std::get<AttentionNet>(model));
  return make_predictor(std::get<Mlp>(model));
}

std::size_t Checkpoint::n_inputs() const {
  return is_attention() ? std::get<AttentionNet>(model).spec().n_features
                        : std::get<Mlp>(model).spec().n_inputs();
}

std::size_t Checkpoint::n_outputs() const {
  return is_attention() ? std::get<AttentionNet>(model).spec().n_outputs
                        : std::get<Mlp>(model).spec().n_outputs();
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  nlohmann::json j;
  j["version"] = 1;
  j["train"] = train_to_json(ckpt.train_config);
  if (ckpt.is_attention()) {
    const auto& m = std::get<AttentionNet>(ckpt.model);
    j["kind"] = "attention";
    j["spec"] = {{"n_features", m.spec().n_features},
                 {"embed_dim", m.spec().embed_dim},
                 {"hidden", m.spec().hidden},
                 {"n_outputs", m.spec().n_outputs},
                 {"cell", m.spec().cell == RecurrentCell::lstm ? "lstm" : "elman"},
                 {"output", act_name(m.spec().output)}};
    j["params"] = m.params();
  } else {
    const auto& m = std::get<Mlp>(ckpt.model);
    j["kind"] = "mlp";
    j["spec"] = {{"layer_sizes", m.spec().layer_sizes},
                 {"hidden", act_name(m.spec().hidden)},
                 {"leaky_slope", m.spec().leaky_slope},
                 {"output", act_name(m.spec().output)}};
    j["params"] = m.params();
  }
  std::ofstream out(path);
  if (!out) throw IoError("checkpoint: cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("checkpoint: cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("checkpoint: invalid JSON: " + std::string(e.what()));
  }
  if (j.value("version", 0) != 1) throw IoError("checkpoint: unsupported version");

  auto params = j.at("params").get<std::vector<double>>();
  const std::string kind = j.at("kind").get<std::string>();
  Checkpoint ckpt{Mlp{MlpSpec{{1, 1, 1}}, std::uint64_t{0}}, train_from_json(j.at("train"))};
  if (kind == "attention") {
    const auto& s = j.at("spec");
    AttentionNetSpec spec;
    spec.n_features = s.at("n_features").get<std::size_t>();
    spec.embed_dim = s.at("embed_dim").get<std::size_t>();
    spec.hidden = s.at("hidden").get<std::size_t>();
    spec.n_outputs = s.at("n_outputs").get<std::size_t>();
    spec.cell = s.at("cell").get<std::string>() == "lstm" ? RecurrentCell::lstm
                                                          : RecurrentCell::elman;
    spec.output = act_from(s.at("output").get<std::string>());
    ckpt.model = AttentionNet(spec, std::move(params));
  } else if (kind == "mlp") {
    const auto& s = j.at("spec");
    MlpSpec spec;
    spec.layer_sizes = s.at("layer_sizes").get<std::vector<std::size_t>>();
    spec.hidden = act_from(s.at("hidden").get<std::string>());
    spec.leaky_slope = s.at("leaky_slope").get<double>();
    spec.output = act_from(s.at("output").get<std::string>());
    ckpt.model = Mlp(spec, std::move(params));
  } else {
    throw IoError("checkpoint: unknown kind '" + kind + "'");
  }
  return ckpt;
}

}  // namespace qxai::nnet
