#include "dlgn/architecture.hpp"

namespace dlgn {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Relu: return "relu";
    case ModelKind::Dlgn: return "dlgn";
    case ModelKind::DlgnPwc: return "dlgn-pwc";
    case ModelKind::Dln: return "dln";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "relu") return ModelKind::Relu;
  if (name == "dlgn") return ModelKind::Dlgn;
  if (name == "dlgn-pwc" || name == "dlgn_pwc") return ModelKind::DlgnPwc;
  if (name == "dln") return ModelKind::Dln;
  throw std::invalid_argument("unknown architecture '" + name +
                              "'; expected relu|dlgn|dlgn-pwc|dln");
}

}  // namespace dlgn
