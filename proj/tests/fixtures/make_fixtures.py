#!/usr/bin/env python3
"""Builds the tiny ONNX graphs (and sidecars) used by the model runtime tests.

Run from anywhere; writes next to this script. The outputs are committed so
the C++ build never needs Python.
"""
import json
import pathlib

import numpy as np
import onnx
from onnx import TensorProto, helper, numpy_helper

HERE = pathlib.Path(__file__).resolve().parent
LABELS = ["BL", "FL", "FLAG", "IC", "MAL", "OAFL", "OAHS", "PL", "VSIT", "NONE"]
OPSET = [helper.make_opsetid("", 11)]


def save(graph, name, sidecar, opsets=OPSET):
    model = helper.make_model(graph, opset_imports=opsets, producer_name="skillbench-fixtures")
    model.ir_version = 6
    onnx.save(model, HERE / f"{name}.onnx")
    (HERE / f"{name}.json").write_text(json.dumps(sidecar, indent=2) + "\n")


def pooled_gemm(name, size, outputs, weight, bias, reshape=None):
    x = helper.make_tensor_value_info("image", TensorProto.FLOAT, [1, 3, size, size])
    inits = [
        numpy_helper.from_array(weight.T.astype(np.float32), "W"),
        numpy_helper.from_array(bias.astype(np.float32), "B"),
    ]
    nodes = [
        helper.make_node("GlobalAveragePool", ["image"], ["pooled"]),
        helper.make_node("Flatten", ["pooled"], ["flat"], axis=1),
        helper.make_node("Gemm", ["flat", "W", "B"], ["gemm"], transB=1),
    ]
    out_name = "gemm"
    out_shape = [1, outputs]
    if reshape is not None:
        inits.append(numpy_helper.from_array(np.array(reshape, dtype=np.int64), "shape"))
        nodes.append(helper.make_node("Reshape", ["gemm", "shape"], ["out"]))
        out_name = "out"
        out_shape = reshape
    y = helper.make_tensor_value_info(out_name, TensorProto.FLOAT, out_shape)
    return helper.make_graph(nodes, name, [x], [y], inits)


def classifier(name, outputs):
    # Logits depend on the per-channel means so different images score
    # differently; class k favours red when k is even and blue when odd.
    w = np.zeros((3, outputs))
    for k in range(outputs):
        w[0 if k % 2 == 0 else 2, k] = 0.5 + 0.1 * k
    b = np.linspace(-0.5, 0.5, outputs)
    graph = pooled_gemm(name, 224, outputs, w, b)
    save(graph, name, {
        "role": "classifier",
        "input_shape": [1, 3, 224, 224],
        "mean": [0.485, 0.456, 0.406],
        "std": [0.229, 0.224, 0.225],
        "class_names": LABELS,
    })


def detector():
    # Two constant detections in letterboxed 640x640 input coordinates:
    # a person (class 0) and a non-person (class 2).
    boxes = np.array([[160, 200, 480, 440, 0.9, 0], [0, 0, 64, 64, 0.95, 2]], dtype=np.float64)
    w = np.zeros((3, 12))
    graph = pooled_gemm("detector", 640, 12, w, boxes.reshape(-1), reshape=[1, 2, 6])
    save(graph, "detector", {
        "role": "detector",
        "input_shape": [1, 3, 640, 640],
        "person_class": 0,
    })


def depth():
    x = helper.make_tensor_value_info("image", TensorProto.FLOAT, [1, 3, 32, 32])
    y = helper.make_tensor_value_info("depth", TensorProto.FLOAT, [1, 1, 32, 32])
    w = np.array([0.299, 0.587, 0.114], dtype=np.float32).reshape(1, 3, 1, 1)
    graph = helper.make_graph(
        [helper.make_node("Conv", ["image", "W"], ["depth"], kernel_shape=[1, 1])],
        "depth", [x], [y], [numpy_helper.from_array(w, "W")])
    save(graph, "depth", {"role": "depth", "input_shape": [1, 3, 32, 32]})


def unsupported():
    x = helper.make_tensor_value_info("image", TensorProto.FLOAT, [1, 3, 224, 224])
    y = helper.make_tensor_value_info("out", TensorProto.FLOAT, [1, 10])
    graph = helper.make_graph(
        [helper.make_node("Frobnicate", ["image"], ["out"], domain="com.example")],
        "unsupported", [x], [y])
    save(graph, "unsupported", {
        "role": "classifier",
        "input_shape": [1, 3, 224, 224],
        "class_names": LABELS,
    }, opsets=OPSET + [helper.make_opsetid("com.example", 1)])


if __name__ == "__main__":
    classifier("classifier", 10)
    classifier("classifier_9", 9)
    detector()
    depth()
    unsupported()
