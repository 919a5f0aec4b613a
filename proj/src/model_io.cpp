// Copyright 2026 The adid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adid/model_io.hpp"

#include <zlib.h>

#include "binary_io.hpp"

namespace adid {
namespace {

template <class... F>
struct Overload : F... {
  using F::operator()...;
};
template <class... F>
Overload(F...) -> Overload<F...>;

void put_matrix(std::vector<double>& params, const Eigen::MatrixXd& m) {
  params.insert(params.end(), m.data(), m.data() + m.size());
}

void put_vector(std::vector<double>& params, const Eigen::VectorXd& v) {
  params.insert(params.end(), v.data(), v.data() + v.size());
}

void put_dense(std::vector<double>& params, const DenseLayer& l) {
  put_matrix(params, l.weights);
  put_vector(params, l.bias);
}

class ParamCursor {
 public:
  explicit ParamCursor(const std::vector<double>& p) : p_(p) {}
  void fill(double* out, Eigen::Index n) {
    if (pos_ + static_cast<std::size_t>(n) > p_.size()) fail(ErrorKind::kFormat, "parameter count too small for shape");
    std::copy_n(p_.begin() + static_cast<std::ptrdiff_t>(pos_), n, out);
    pos_ += static_cast<std::size_t>(n);
  }
  DenseLayer dense(Eigen::Index out, Eigen::Index in) {
    DenseLayer l;
    l.weights.resize(out, in);
    l.bias.resize(out);
    fill(l.weights.data(), l.weights.size());
    fill(l.bias.data(), l.bias.size());
    return l;
  }
  double scalar() {
    double v;
    fill(&v, 1);
    return v;
  }
  void finish() const {
    if (pos_ != p_.size()) fail(ErrorKind::kFormat, "parameter count exceeds shape");
  }

 private:
  const std::vector<double>& p_;
  std::size_t pos_ = 0;
};

struct Encoded {
  std::vector<std::uint32_t> shape;
  std::vector<double> params;
};

Encoded encode_mlp_layers(const MlpModel& m, Encoded e) {
  for (const auto& l : m.layers) put_dense(e.params, l);
  return e;
}

Encoded encode(const Model& model) {
  return std::visit(
      Overload{
          [](const SoftmaxModel& m) {
            Encoded e;
            e.shape = {static_cast<std::uint32_t>(m.input_dim())};
            put_matrix(e.params, m.theta);
            e.params.push_back(m.lambda);
            return e;
          },
          [](const MlpModel& m) {
            Encoded e;
            e.shape.push_back(static_cast<std::uint32_t>(m.loss));
            for (auto s : m.layer_sizes()) e.shape.push_back(static_cast<std::uint32_t>(s));
            return encode_mlp_layers(m, std::move(e));
          },
          [](const AveragedMlpModel& m) {
            Encoded e;
            e.shape = {static_cast<std::uint32_t>(m.head.loss), static_cast<std::uint32_t>(m.input_dim),
                       static_cast<std::uint32_t>(m.chunks.size())};
            for (const auto& l : m.chunk_layers) e.shape.push_back(static_cast<std::uint32_t>(l.weights.rows()));
            auto head = m.head.layer_sizes();
            for (std::size_t i = 1; i < head.size(); ++i) e.shape.push_back(static_cast<std::uint32_t>(head[i]));
            for (const auto& l : m.chunk_layers) put_dense(e.params, l);
            return encode_mlp_layers(m.head, std::move(e));
          },
          [](const CnnModel& m) {
            Encoded e;
            e.shape = {static_cast<std::uint32_t>(m.input_length), static_cast<std::uint32_t>(m.stages.size())};
            for (const auto& s : m.architecture()) {
              e.shape.push_back(static_cast<std::uint32_t>(s.filters));
              e.shape.push_back(static_cast<std::uint32_t>(s.width));
              e.shape.push_back(static_cast<std::uint32_t>(s.stride));
              e.shape.push_back(static_cast<std::uint32_t>(s.pool));
            }
            for (const auto& s : m.stages) {
              put_matrix(e.params, s.filters);
              put_vector(e.params, s.bias);
            }
            put_dense(e.params, m.dense);
            return e;
          },
      },
      model);
}

Loss decode_loss(std::uint32_t code) {
  if (code > 1) fail(ErrorKind::kFormat, "unknown loss code " + std::to_string(code));
  return static_cast<Loss>(code);
}

MlpModel decode_layers(std::span<const std::uint32_t> sizes, ParamCursor& cur) {
  if (sizes.size() < 2) fail(ErrorKind::kFormat, "network needs at least two layer sizes");
  MlpModel m;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) m.layers.push_back(cur.dense(sizes[i + 1], sizes[i]));
  return m;
}

Model decode(ModelType type, std::uint32_t classes, const std::vector<std::uint32_t>& shape,
             const std::vector<double>& params) {
  ParamCursor cur(params);
  auto need = [&shape](std::size_t n) {
    if (shape.size() < n) fail(ErrorKind::kFormat, "shape list too short");
  };
  switch (type) {
    case ModelType::kSoftmax: {
      need(1);
      SoftmaxModel m;
      m.theta.resize(classes, static_cast<Eigen::Index>(shape[0]) + 1);
      cur.fill(m.theta.data(), m.theta.size());
      m.lambda = cur.scalar();
      cur.finish();
      return m;
    }
    case ModelType::kMlp: {
      need(3);
      MlpModel m = decode_layers(std::span(shape).subspan(1), cur);
      m.loss = decode_loss(shape[0]);
      cur.finish();
      return m;
    }
    case ModelType::kMlpAveraged: {
      need(3);
      AveragedMlpModel m;
      m.input_dim = shape[1];
      const std::size_t chunks = shape[2];
      need(3 + chunks + 1);
      m.chunks = chunk_ranges(m.input_dim, chunks);
      std::vector<std::uint32_t> head_sizes{0};
      for (std::size_t c = 0; c < chunks; ++c) {
        m.chunk_layers.push_back(cur.dense(shape[3 + c], static_cast<Eigen::Index>(m.chunks[c].length)));
        head_sizes[0] += shape[3 + c];
      }
      head_sizes.insert(head_sizes.end(), shape.begin() + 3 + static_cast<std::ptrdiff_t>(chunks), shape.end());
      m.head = decode_layers(head_sizes, cur);
      m.head.loss = decode_loss(shape[0]);
      cur.finish();
      return m;
    }
    case ModelType::kCnn: {
      need(2);
      const std::size_t stages = shape[1];
      need(2 + 4 * stages);
      std::vector<ConvSpec> specs;
      for (std::size_t s = 0; s < stages; ++s)
        specs.push_back({static_cast<int>(shape[2 + 4 * s]), static_cast<int>(shape[3 + 4 * s]),
                         static_cast<int>(shape[4 + 4 * s]), static_cast<int>(shape[5 + 4 * s])});
      CnnModel m = cnn_init(shape[0], static_cast<int>(classes), specs, 0);
      for (auto& s : m.stages) {
        cur.fill(s.filters.data(), s.filters.size());
        cur.fill(s.bias.data(), s.bias.size());
      }
      cur.fill(m.dense.weights.data(), m.dense.weights.size());
      cur.fill(m.dense.bias.data(), m.dense.bias.size());
      cur.finish();
      return m;
    }
  }
  fail(ErrorKind::kTypeTag, "unknown model type tag " + std::to_string(static_cast<int>(type)));
}

template <class T>
T expect_type(Model model, ModelType want, const std::filesystem::path& path) {
  if (auto* m = std::get_if<T>(&model)) return std::move(*m);
  fail(ErrorKind::kTypeTag, path.string() + " holds a " + std::string(model_type_name(model_type(model))) +
                                " model, expected " + std::string(model_type_name(want)));
}

}  // namespace

ModelType model_type(const Model& model) { return static_cast<ModelType>(model.index()); }

std::string_view model_type_name(ModelType type) {
  switch (type) {
    case ModelType::kSoftmax: return "softmax";
    case ModelType::kMlp: return "mlp";
    case ModelType::kMlpAveraged: return "mlp-averaged";
    case ModelType::kCnn: return "cnn";
  }
  return "?";
}

int model_class_count(const Model& model) {
  return std::visit([](const auto& m) { return m.class_count(); }, model);
}

std::size_t model_input_dim(const Model& model) {
  return std::visit(Overload{
                        [](const SoftmaxModel& m) { return m.input_dim(); },
                        [](const MlpModel& m) { return m.input_dim(); },
                        [](const AveragedMlpModel& m) { return m.input_dim; },
                        [](const CnnModel& m) { return m.input_length; },
                    },
                    model);
}

Eigen::MatrixXd predict_batch(const Model& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
  if (static_cast<std::size_t>(inputs.rows()) != model_input_dim(model))
    fail(ErrorKind::kShape, "model expects dimension " + std::to_string(model_input_dim(model)) +
                                " but features have dimension " + std::to_string(inputs.rows()));
  return std::visit(Overload{
                        [&](const SoftmaxModel& m) { return softmax_predict_batch(m, inputs); },
                        [&](const MlpModel& m) { return mlp_forward_batch(m, inputs); },
                        [&](const AveragedMlpModel& m) { return averaged_mlp_forward_batch(m, inputs); },
                        [&](const CnnModel& m) { return cnn_predict_batch(m, inputs); },
                    },
                    model);
}

std::vector<int> predict_labels(const Model& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(inputs.cols()));
  constexpr Eigen::Index kChunk = 512;
  for (Eigen::Index start = 0; start < inputs.cols(); start += kChunk) {
    const Eigen::Index n = std::min(kChunk, inputs.cols() - start);
    const Eigen::MatrixXd p = predict_batch(model, inputs.middleCols(start, n));
    for (Eigen::Index j = 0; j < n; ++j) out.push_back(argmax_label(p.col(j)));
  }
  return out;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  const Encoded e = encode(model);
  detail::ByteWriter payload;
  payload.u8(static_cast<std::uint8_t>(model_type(model)));
  payload.u32(static_cast<std::uint32_t>(model_class_count(model)));
  payload.u32(static_cast<std::uint32_t>(e.shape.size()));
  for (auto s : e.shape) payload.u32(s);
  payload.u64(e.params.size());
  payload.f64s(e.params);

  detail::ByteWriter file;
  file.tag("ADID");
  file.u32(kModelFileVersion);
  file.raw(payload.bytes().data(), payload.bytes().size());
  file.u32(static_cast<std::uint32_t>(
      crc32(0L, payload.bytes().data(), static_cast<uInt>(payload.bytes().size()))));
  file.save(path);
}

Model load_model(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  detail::ByteReader r(bytes, path.string());
  if (bytes.size() < 4 || !r.tag_matches("ADID")) fail(ErrorKind::kFormat, "bad magic in model file " + path.string());
  const auto version = r.read<std::uint32_t>();
  if (version != kModelFileVersion) fail(ErrorKind::kFormat, "unsupported model file version " + std::to_string(version));

  const std::size_t payload_start = r.position();
  const auto tag = r.read<std::uint8_t>();
  if (tag > static_cast<std::uint8_t>(ModelType::kCnn))
    fail(ErrorKind::kTypeTag, "unknown model type tag " + std::to_string(tag));
  const auto classes = r.read<std::uint32_t>();
  std::vector<std::uint32_t> shape(r.read<std::uint32_t>());
  for (auto& s : shape) s = r.read<std::uint32_t>();
  const auto count = r.read<std::uint64_t>();
  if (count > r.remaining() / sizeof(double)) fail(ErrorKind::kIo, "truncated model file " + path.string());
  std::vector<double> params(count);
  r.f64s(params);
  const std::size_t payload_end = r.position();
  const auto stored_crc = r.read<std::uint32_t>();
  if (r.remaining() != 0) fail(ErrorKind::kFormat, "trailing bytes in model file " + path.string());
  const auto crc = static_cast<std::uint32_t>(
      crc32(0L, bytes.data() + payload_start, static_cast<uInt>(payload_end - payload_start)));
  if (crc != stored_crc) fail(ErrorKind::kFormat, "checksum mismatch in model file " + path.string());
  return decode(static_cast<ModelType>(tag), classes, shape, params);
}

SoftmaxModel load_softmax(const std::filesystem::path& path) {
  return expect_type<SoftmaxModel>(load_model(path), ModelType::kSoftmax, path);
}
MlpModel load_mlp(const std::filesystem::path& path) { return expect_type<MlpModel>(load_model(path), ModelType::kMlp, path); }
AveragedMlpModel load_averaged_mlp(const std::filesystem::path& path) {
  return expect_type<AveragedMlpModel>(load_model(path), ModelType::kMlpAveraged, path);
}
CnnModel load_cnn(const std::filesystem::path& path) { return expect_type<CnnModel>(load_model(path), ModelType::kCnn, path); }

}  // namespace adid
